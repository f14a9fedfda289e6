"""Report construction and command dispatch for the file-driven harness.

Every command produces a :class:`Report`: named boolean verdicts, named
scalars, named matrices, and a list of oracle checks, each with a finite
discrepancy.  Rendering is deterministic, so identical (instance, seed,
tolerances) inputs yield byte-identical report text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import contractive as ct
from . import kvn as kv
from . import partial_op as po
from . import psd_equation as pe
from . import shorted as sh
from .errors import (
    KreinextError,
    MissingSection,
    NoExtension,
    NotSolvable,
    OracleMismatch,
    ParseError,
)
from .instance import InstanceFile, format_float
from .numerics import (
    DEFAULT_TOL,
    Subspace,
    ToleranceProfile,
    is_psd,
    loewner_leq,
    spectral_norm,
    sym,
)
from .sampling import (
    random_psd,
    random_symmetric,
    sample_interval_member,
    sample_psd_extension,
)

__all__ = ["OracleCheck", "Report", "run_command", "COMMANDS"]

COMMANDS = ("check", "kvn", "short", "interval", "unique", "solve", "verify-all")


@dataclass
class OracleCheck:
    name: str
    passed: bool
    discrepancy: float


@dataclass
class Report:
    command: str
    tolerances: ToleranceProfile
    seed: int | None = None
    verdicts: list = field(default_factory=list)
    scalars: list = field(default_factory=list)
    matrices: list = field(default_factory=list)
    oracle_checks: list = field(default_factory=list)

    def verdict(self, name: str, value: bool) -> None:
        self.verdicts.append((name, bool(value)))

    def scalar(self, name: str, value: float) -> None:
        self.scalars.append((name, float(value)))

    def matrix(self, name: str, value: np.ndarray) -> None:
        self.matrices.append((name, np.asarray(value, dtype=float)))

    def oracle(self, name: str, passed: bool, discrepancy: float) -> None:
        d = float(discrepancy)
        if not math.isfinite(d):
            d = 1.0
        self.oracle_checks.append(OracleCheck(name, bool(passed), d))

    @property
    def all_oracles_pass(self) -> bool:
        return all(c.passed for c in self.oracle_checks)

    def get_verdict(self, name: str):
        for key, value in self.verdicts:
            if key == name:
                return value
        return None

    def render(self) -> str:
        t = self.tolerances
        out = [
            "kreinext-report",
            f"command {self.command}",
            "tolerances "
            f"{format_float(t.rank_rel)} {format_float(t.psd_slack)} "
            f"{format_float(t.residual)}",
        ]
        if self.seed is not None:
            out.append(f"seed {self.seed}")
        for name, value in self.verdicts:
            out.append(f"verdict {name} {'true' if value else 'false'}")
        for name, value in self.scalars:
            out.append(f"scalar {name} {format_float(value)}")
        for name, value in self.matrices:
            out.append(f"matrix {name} {value.shape[0]} {value.shape[1]}")
            for row in value:
                out.append(" ".join(format_float(x) for x in row))
        for check in self.oracle_checks:
            status = "pass" if check.passed else "fail"
            out.append(
                f"oracle {check.name} {status} {format_float(check.discrepancy)}"
            )
        return "\n".join(out) + "\n"


def _require(inst: InstanceFile, *sections: str) -> None:
    for name in sections:
        if getattr(inst, name) is None:
            raise MissingSection(f"command requires the {name!r} section")


def _partial(inst: InstanceFile, tol: ToleranceProfile) -> po.PartialOperator:
    _require(inst, "domain", "image")
    return po.make_partial(inst.domain_matrix(), inst.image_matrix(), tol)


def _contraction(inst: InstanceFile, tol: ToleranceProfile) -> ct.ContractivePartial:
    _require(inst, "domain", "image")
    return ct.make_contractive(inst.domain_matrix(), inst.image_matrix(), tol)


def _domain_subspace(inst: InstanceFile, tol: ToleranceProfile) -> Subspace:
    _require(inst, "domain")
    return Subspace.from_span(inst.domain_matrix(), tol)


def _rel(err: float, scale: float) -> float:
    return err / max(scale, 1.0)


def _cmd_check(inst, tol, seed, samples) -> Report:
    rep = Report("check", tol, seed)
    P = _partial(inst, tol)
    conditions = po.extendibility_report(P)
    ok, gamma = po.has_bounded_psd_extension(P)
    rep.verdict("extension_exists", ok)
    rep.verdict("dstar_dense", conditions.dstar_dense)
    rep.verdict("perp_ran_trivial", conditions.perp_ran_trivial)
    rep.verdict("pos_closable", conditions.pos_closable)
    rep.verdict("all_agree", conditions.all_agree)
    rep.scalar("dstar_dim", po.dstar(P).dim)
    if gamma is not None:
        rep.scalar("gamma", gamma)
    flags = [conditions.dstar_dense, conditions.perp_ran_trivial,
             conditions.pos_closable, ok]
    rep.oracle("extendibility_conditions_agree", conditions.all_agree,
               float(len(set(flags)) - 1))
    return rep


def _cmd_kvn(inst, tol, seed, samples) -> Report:
    rep = Report("kvn", tol, seed)
    P = _partial(inst, tol)
    tn = kv.kvn_extension(P)  # NoExtension propagates (infeasible)
    ok, gamma = po.has_bounded_psd_extension(P)
    rep.verdict("extension_exists", True)
    rep.scalar("gamma", gamma)
    rep.scalar("kvn_norm", spectral_norm(tn))
    rep.matrix("kvn_extension", tn)

    scale = max(spectral_norm(P.image), 1.0)
    res = spectral_norm(tn @ P.dom_basis - P.image)
    rep.oracle("extension_residual", res <= tol.residual * scale, _rel(res, scale))
    gap = abs(spectral_norm(tn) - gamma)
    rep.oracle("norm_matches_gamma", gap <= tol.residual * max(gamma, 1.0),
               _rel(gap, max(gamma, 1.0)))

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(max(samples, 1)):
        g = rng.standard_normal(P.ambient_dim)
        direct = float(g @ tn @ g)
        viaform = kv.qform_tn(P, g)
        worst = max(worst, _rel(abs(direct - viaform), max(abs(direct), 1.0)))
    rep.oracle("variational_form_identity", worst <= tol.residual, worst)
    return rep


def _coordinate_block(D: Subspace, tol: ToleranceProfile) -> int | None:
    """Size p if D is exactly the span of the first p coordinates, else None."""
    proj = D.projector()
    n = D.ambient_dim
    p = D.dim
    want = np.zeros((n, n))
    want[:p, :p] = np.eye(p)
    return p if spectral_norm(proj - want) <= tol.residual else None


def _cmd_short(inst, tol, seed, samples) -> Report:
    rep = Report("short", tol, seed)
    _require(inst, "full_operator")
    D = _domain_subspace(inst, tol)
    S = sym(inst.full_operator)
    result = sh.short_to(S, D, tol)
    rep.scalar("subspace_dim", D.dim)
    rep.matrix("shorted", result.shorted)
    rep.matrix("kvn_part", result.kvn_part)

    scale = max(spectral_norm(S), 1.0)
    res = spectral_norm(result.shorted + result.kvn_part - S)
    rep.oracle("decomposition_sums", res <= tol.residual * scale, _rel(res, scale))
    rep.oracle("shorted_psd", is_psd(result.shorted, tol), 0.0)
    ann = spectral_norm(result.shorted @ D.basis)
    rep.oracle("annihilates_domain", ann <= tol.residual * scale, _rel(ann, scale))

    rng = np.random.default_rng(seed)
    worst = 0.0
    bad = 0
    for _ in range(max(samples, 1)):
        h = rng.standard_normal(D.ambient_dim)
        try:
            value = sh.shorted_qform(S, D, h, tol)
        except OracleMismatch:
            bad += 1
            continue
        worst = max(worst, _rel(abs(value - float(h @ result.shorted @ h)),
                                max(abs(value), 1.0)))
    rep.oracle("quadratic_form_oracle", bad == 0 and worst <= tol.residual,
               float(bad) if bad else worst)

    try:
        sh.shorted_root_range(S, D, tol)
        rep.oracle("root_range_identity", True, 0.0)
    except KreinextError:
        rep.oracle("root_range_identity", False, 1.0)

    p = _coordinate_block(D, tol)
    if p is not None:
        diff = spectral_norm(result.shorted - sh.schur_oracle(S, p, tol))
        rep.oracle("schur_complement_agreement", diff <= tol.residual * scale,
                   _rel(diff, scale))
    return rep


def _cmd_interval(inst, tol, seed, samples) -> Report:
    rep = Report("interval", tol, seed)
    C = _contraction(inst, tol)
    iv = ct.extremal_extensions(C)
    rep.scalar("operator_norm_on_domain", C.operator_norm_on_d)
    rep.scalar("norm_s_m", spectral_norm(iv.s_m))
    rep.scalar("norm_s_M", spectral_norm(iv.s_M))
    rep.scalar("gap_norm", spectral_norm(iv.s_M - iv.s_m))
    rep.matrix("s_m", iv.s_m)
    rep.matrix("s_M", iv.s_M)

    scale = max(spectral_norm(C.image), 1.0)
    worst = max(
        spectral_norm(iv.s_m @ C.dom_basis - C.image),
        spectral_norm(iv.s_M @ C.dom_basis - C.image),
    )
    rep.oracle("endpoints_extend", worst <= tol.residual * scale, _rel(worst, scale))
    excess = max(spectral_norm(iv.s_m), spectral_norm(iv.s_M)) - 1.0
    rep.oracle("endpoint_norms_at_most_one", excess <= tol.residual, max(excess, 0.0))
    rep.oracle("endpoints_ordered", loewner_leq(iv.s_m, iv.s_M, tol), 0.0)
    try:
        mid_ok = ct.interval_member(iv.midpoint(), C)
        rep.oracle("midpoint_membership", mid_ok, 0.0)
    except OracleMismatch:
        rep.oracle("midpoint_membership", False, 1.0)

    if inst.full_operator is not None:
        try:
            rep.verdict("candidate_is_member",
                        ct.interval_member(sym(inst.full_operator), C))
        except OracleMismatch:
            rep.oracle("candidate_membership_routes", False, 1.0)
    return rep


def _cmd_unique(inst, tol, seed, samples) -> Report:
    rep = Report("unique", tol, seed)
    C = _contraction(inst, tol)
    iv = ct.extremal_extensions(C)
    rep.scalar("operator_norm_on_domain", C.operator_norm_on_d)
    rep.scalar("gap_norm", spectral_norm(iv.s_M - iv.s_m))
    try:
        unique = ct.uniqueness(C)
        rep.verdict("unique", unique)
        rep.oracle("uniqueness_routes_agree", True, 0.0)
    except OracleMismatch:
        rep.oracle("uniqueness_routes_agree", False, 1.0)
    return rep


def _cmd_solve(inst, tol, seed, samples) -> Report:
    rep = Report("solve", tol, seed)
    _require(inst, "equation_a", "equation_b")
    A = inst.equation_a
    B = inst.equation_b
    report = pe.check_solvable(A, B, tol)
    rep.verdict("well_defined", report.well_defined)
    rep.verdict("symmetric_form", report.symmetric_form)
    rep.verdict("positive_form", report.positive_form)
    rep.verdict("bounded_condition", report.bounded_condition)
    rep.verdict("solvable", report.solvable)

    if report.solvable:
        SN = pe.solve_min(A, B, tol)
        rep.matrix("minimal_solution", SN)
        scale = max(spectral_norm(B), 1.0)
        res = spectral_norm(SN @ A - B)
        rep.oracle("solution_residual", res <= tol.residual * scale, _rel(res, scale))
        rng = np.random.default_rng(seed)
        perp = np.eye(A.shape[0]) - (lambda Q: Q @ Q.T)(
            np.linalg.svd(A, full_matrices=False)[0]
        )
        bad = 0
        for _ in range(max(samples, 1)):
            S2 = sym(SN + perp @ random_psd(rng, A.shape[0]) @ perp)
            if spectral_norm(S2 @ A - B) > tol.residual * scale:
                bad += 1
            elif not loewner_leq(SN, S2, tol):
                bad += 1
        rep.oracle("minimality_under_sampling", bad == 0, float(bad))
    elif report.certificate is not None:
        x = report.certificate
        rep.matrix("certificate", x.reshape(-1, 1))
        W = sym(B.T @ A)
        form = abs(float(x @ W @ x))
        image = float(np.linalg.norm(B @ x))
        scale = max(spectral_norm(B) * spectral_norm(A), 1.0)
        ok = form <= tol.residual * scale and image > 10.0 * tol.residual * scale
        rep.oracle("certificate_verifies", ok, _rel(form, scale))
    return rep


def _verify_positive(rep: Report, inst, tol, rng, samples) -> None:
    try:
        P = _partial(inst, tol)
    except KreinextError:
        return
    conditions = po.extendibility_report(P)
    ok, gamma = po.has_bounded_psd_extension(P)
    flags = [conditions.dstar_dense, conditions.perp_ran_trivial,
             conditions.pos_closable, ok]
    rep.verdict("extension_exists", ok)
    rep.oracle("extendibility_conditions_agree", conditions.all_agree,
               float(len(set(flags)) - 1))
    if not ok:
        return

    tn = kv.kvn_extension(P)
    scale = max(spectral_norm(P.image), 1.0)
    res = spectral_norm(tn @ P.dom_basis - P.image)
    rep.oracle("minimal_extension_extends", res <= tol.residual * scale,
               _rel(res, scale))
    gap = abs(spectral_norm(tn) - gamma)
    rep.oracle("minimal_extension_norm_is_gamma",
               gap <= tol.residual * max(gamma, 1.0), _rel(gap, max(gamma, 1.0)))

    bad_min = 0
    bad_range = 0
    for _ in range(samples):
        S = sample_psd_extension(rng, P, tn)
        if not loewner_leq(tn, S, tol):
            bad_min += 1
        crit = kv.kvn_range_criterion(S, P)
        close = spectral_norm(S - tn) <= tol.residual * max(spectral_norm(tn), 1.0)
        if crit != close:
            bad_range += 1
    if not kv.kvn_range_criterion(tn, P):
        bad_range += 1
    rep.oracle("minimality_under_sampling", bad_min == 0, float(bad_min))
    rep.oracle("root_range_equality_criterion", bad_range == 0, float(bad_range))

    worst_form = 0.0
    worst_rayleigh = 0.0
    for _ in range(samples):
        g = rng.standard_normal(P.ambient_dim)
        direct = float(g @ tn @ g)
        viaform = kv.qform_tn(P, g)
        worst_form = max(
            worst_form, _rel(abs(direct - viaform), max(abs(direct), 1.0))
        )
        if P.dom_dim:
            c = rng.standard_normal(P.dom_dim)
            energy = float(c @ P.gram @ c)
            if energy > tol.residual:
                quotient = float(g @ P.image @ c) ** 2 / energy
                worst_rayleigh = max(
                    worst_rayleigh,
                    _rel(quotient - viaform, max(abs(viaform), 1.0)),
                )
    rep.oracle("variational_form_identity", worst_form <= tol.residual, worst_form)
    rep.oracle("rayleigh_quotients_dominated",
               worst_rayleigh <= tol.residual, max(worst_rayleigh, 0.0))

    bad_char = 0
    for _ in range(samples):
        if rng.uniform() < 0.5:
            cand = sample_psd_extension(rng, P, tn)
        else:
            cand = random_symmetric(rng, P.ambient_dim)
        if not is_psd(cand, tol):
            continue
        direct = kv.is_extension(cand, P)
        via = kv.characterize_extension(cand, P)
        if direct != via:
            bad_char += 1
    rep.oracle("extension_characterization_agrees", bad_char == 0, float(bad_char))


def _verify_contraction(rep: Report, inst, tol, rng, samples) -> None:
    try:
        C = _contraction(inst, tol)
    except KreinextError:
        return
    iv = ct.extremal_extensions(C)
    scale = max(spectral_norm(C.image), 1.0)
    worst = max(
        spectral_norm(iv.s_m @ C.dom_basis - C.image),
        spectral_norm(iv.s_M @ C.dom_basis - C.image),
    )
    ordered = loewner_leq(iv.s_m, iv.s_M, tol)
    excess = max(spectral_norm(iv.s_m), spectral_norm(iv.s_M)) - 1.0
    rep.oracle(
        "extremal_interval_wellformed",
        worst <= tol.residual * scale and ordered and excess <= tol.residual,
        max(_rel(worst, scale), excess, 0.0 if ordered else 1.0),
    )

    bad_member = 0
    for j in range(samples):
        lam = j / max(samples - 1, 1)
        try:
            if not ct.interval_member(
                sym(lam * iv.s_m + (1.0 - lam) * iv.s_M), C
            ):
                bad_member += 1
        except OracleMismatch:
            bad_member += 1
        try:
            if not ct.interval_member(sample_interval_member(rng, iv, tol), C):
                bad_member += 1
        except OracleMismatch:
            bad_member += 1
    rep.oracle("interval_membership_routes", bad_member == 0, float(bad_member))

    try:
        unique = ct.uniqueness(C)
        rep.verdict("unique", unique)
        rep.oracle("uniqueness_routes_agree", True, 0.0)
    except OracleMismatch:
        rep.oracle("uniqueness_routes_agree", False, 1.0)


def _verify_shorted(rep: Report, inst, tol, rng, samples) -> None:
    if inst.full_operator is None or inst.domain is None:
        return
    S = sym(inst.full_operator)
    if not is_psd(S, tol):
        return
    D = _domain_subspace(inst, tol)
    result = sh.short_to(S, D, tol)
    scale = max(spectral_norm(S), 1.0)
    res = spectral_norm(result.shorted + result.kvn_part - S)
    ann = spectral_norm(result.shorted @ D.basis)
    rep.oracle(
        "shorted_decomposition",
        res <= tol.residual * scale
        and ann <= tol.residual * scale
        and is_psd(result.shorted, tol)
        and loewner_leq(result.shorted, S, tol),
        max(_rel(res, scale), _rel(ann, scale)),
    )

    worst = 0.0
    bad = 0
    for _ in range(samples):
        h = rng.standard_normal(D.ambient_dim)
        try:
            value = sh.shorted_qform(S, D, h, tol)
        except OracleMismatch:
            bad += 1
            continue
        worst = max(worst, _rel(abs(value - float(h @ result.shorted @ h)),
                                max(abs(value), 1.0)))
    rep.oracle("shorted_quadratic_form_oracle",
               bad == 0 and worst <= tol.residual,
               float(bad) if bad else worst)

    try:
        sh.shorted_root_range(S, D, tol)
        rep.oracle("shorted_root_range_identity", True, 0.0)
    except KreinextError:
        rep.oracle("shorted_root_range_identity", False, 1.0)

    p = _coordinate_block(D, tol)
    if p is not None:
        diff = spectral_norm(result.shorted - sh.schur_oracle(S, p, tol))
        rep.oracle("schur_complement_agreement", diff <= tol.residual * scale,
                   _rel(diff, scale))


def _verify_equation(rep: Report, inst, tol, rng, samples) -> None:
    if inst.equation_a is None:
        return
    A = inst.equation_a
    B = inst.equation_b
    report = pe.check_solvable(A, B, tol)
    rep.verdict("solvable", report.solvable)
    if report.solvable:
        SN = pe.solve_min(A, B, tol)
        scale = max(spectral_norm(B), 1.0)
        res = spectral_norm(SN @ A - B)
        rep.oracle("equation_solution_residual", res <= tol.residual * scale,
                   _rel(res, scale))
        U = np.linalg.svd(A, full_matrices=False)[0]
        perp = np.eye(A.shape[0]) - U @ U.T
        bad = 0
        for _ in range(samples):
            S2 = sym(SN + perp @ random_psd(rng, A.shape[0]) @ perp)
            if spectral_norm(S2 @ A - B) > tol.residual * scale:
                bad += 1
            elif not loewner_leq(SN, S2, tol):
                bad += 1
        rep.oracle("equation_minimality_under_sampling", bad == 0, float(bad))
    elif report.certificate is not None:
        x = report.certificate
        W = sym(B.T @ A)
        form = abs(float(x @ W @ x))
        image = float(np.linalg.norm(B @ x))
        scale = max(spectral_norm(B) * spectral_norm(A), 1.0)
        ok = form <= tol.residual * scale and image > 10.0 * tol.residual * scale
        rep.oracle("equation_certificate_verifies", ok, _rel(form, scale))


def _cmd_verify_all(inst, tol, seed, samples) -> Report:
    rep = Report("verify-all", tol, seed)
    rng = np.random.default_rng(seed)
    _verify_positive(rep, inst, tol, rng, samples)
    _verify_contraction(rep, inst, tol, rng, samples)
    _verify_shorted(rep, inst, tol, rng, samples)
    _verify_equation(rep, inst, tol, rng, samples)
    if not rep.oracle_checks:
        raise MissingSection("instance has no section any check applies to")
    rep.verdict("all_checks_pass", rep.all_oracles_pass)
    return rep


_DISPATCH = {
    "check": _cmd_check,
    "kvn": _cmd_kvn,
    "short": _cmd_short,
    "interval": _cmd_interval,
    "unique": _cmd_unique,
    "solve": _cmd_solve,
    "verify-all": _cmd_verify_all,
}


def run_command(
    command: str,
    inst: InstanceFile,
    tol: ToleranceProfile | None = None,
    seed: int | None = None,
    samples: int = 50,
) -> Report:
    """Dispatch a harness command on a parsed instance.

    Tolerances resolve as: explicit argument, else the instance's own
    ``tolerances`` section, else the defaults.  The seed resolves the same
    way and feeds every sampling-based check, making reports reproducible.
    """
    if command not in _DISPATCH:
        raise ParseError(f"unknown command {command!r}; choose from {COMMANDS}")
    if tol is None:
        tol = inst.tolerances or DEFAULT_TOL
    if seed is None:
        seed = inst.seed if inst.seed is not None else 0
    if samples < 1:
        raise ParseError("samples must be at least 1")
    return _DISPATCH[command](inst, tol, seed, samples)
