"""Self-adjoint contractive extensions of a symmetric contraction on a subspace.

A symmetric contraction S given on a subspace D always extends to symmetric
matrices of norm at most one, and those extensions form an operator
interval [s_m, s_M].  The endpoints come out of the minimal positive
extensions of I + S and I - S:

    s_m = (I + S)_N - I,        s_M = I - (I - S)_N.

Both restrictions are extendible without further hypotheses because
||(I +- S)f||^2 <= 2 <(I +- S)f, f> on the domain.

Uniqueness of the norm-preserving extension (the interval collapsing to a
point) is decided by three independent routes: the endpoint gap, the triple
range intersection ran(I - M)^(1/2) .cap. ran(I + M)^(1/2) .cap. D-perp at
the midpoint M, and the supremum test on the complement of the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentAction,
    NotContraction,
    NotSymmetric,
    RouteMismatch,
    ShapeMismatch,
)
from .numerics import (
    DEFAULT_TOL,
    Subspace,
    ToleranceProfile,
    as_matrix,
    as_vector,
    is_psd,
    loewner_leq,
    pinv,
    psd_range,
    range_intersect,
    spectral_norm,
    sym,
    _frozen,
    _square,
)
from .partial_op import make_partial
from .kvn import kvn_extension

__all__ = [
    "ContractivePartial",
    "ExtensionInterval",
    "make_contractive",
    "extremal_extensions",
    "interval_member",
    "uniqueness",
    "sup_qform",
]


@dataclass(frozen=True)
class ContractivePartial:
    """A symmetric contraction given on a subspace, in orthonormal coordinates."""

    ambient_dim: int
    dom_basis: np.ndarray
    image: np.ndarray
    operator_norm_on_d: float
    tol: ToleranceProfile

    @property
    def dom_dim(self) -> int:
        return self.dom_basis.shape[1]

    def domain(self) -> Subspace:
        return Subspace(self.ambient_dim, self.dom_basis)


def make_contractive(dom_basis, image, tol: ToleranceProfile = DEFAULT_TOL) -> ContractivePartial:
    """Validate and build a :class:`ContractivePartial`.

    Orthonormalizes the domain like :func:`make_partial` does, then checks
    symmetry of the induced form and the contraction property
    I - image^T image >= 0.  Strict contractions (norm below one) are
    accepted; the norm actually attained on the domain is recorded.
    """
    B = as_matrix(dom_basis)
    J = as_matrix(image)
    if B.shape != J.shape:
        raise ShapeMismatch(f"domain basis is {B.shape}, image is {J.shape}")
    n, k = B.shape

    if k == 0 or spectral_norm(B) == 0.0:
        if k > 0 and spectral_norm(J) > tol.residual:
            raise InconsistentAction("zero domain vectors carry a nonzero image")
        empty = np.zeros((n, 0))
        return ContractivePartial(n, _frozen(empty), _frozen(empty), 0.0, tol)

    U, s, Vt = np.linalg.svd(B, full_matrices=False)
    r = int(np.count_nonzero(s > tol.rank_rel * s[0]))
    null = Vt[r:].T
    if null.size and spectral_norm(J @ null) > tol.residual * max(spectral_norm(J), 1.0):
        raise InconsistentAction("image does not vanish on the kernel of the basis")
    Q = U[:, :r]
    J2 = J @ (Vt[:r].T / s[:r])

    G0 = Q.T @ J2
    if spectral_norm(G0 - G0.T) > tol.residual * max(spectral_norm(G0), 1.0):
        raise NotSymmetric("the induced bilinear form is not symmetric")
    if not is_psd(np.eye(r) - J2.T @ J2, tol):
        raise NotContraction("the action has norm exceeding one on the domain")
    return ContractivePartial(n, _frozen(Q), _frozen(J2), spectral_norm(J2), tol)


@dataclass(frozen=True)
class ExtensionInterval:
    """Extremal self-adjoint contractive extensions; s_m <= s_M in Loewner order."""

    s_m: np.ndarray
    s_M: np.ndarray

    def midpoint(self) -> np.ndarray:
        return (self.s_m + self.s_M) / 2.0


def extremal_extensions(C: ContractivePartial) -> ExtensionInterval:
    """Extremal extensions from the minimal positive extensions of I +- S."""
    n = C.ambient_dim
    eye = np.eye(n)
    plus = make_partial(C.dom_basis, C.dom_basis + C.image, C.tol)
    minus = make_partial(C.dom_basis, C.dom_basis - C.image, C.tol)
    s_m = sym(kvn_extension(plus) - eye)
    s_M = sym(eye - kvn_extension(minus))
    return ExtensionInterval(_frozen(s_m), _frozen(s_M))


def _extends(S: np.ndarray, C: ContractivePartial) -> bool:
    res = spectral_norm(S @ C.dom_basis - C.image)
    return res <= C.tol.residual * max(spectral_norm(C.image), 1.0)


def interval_member(S_tilde, C: ContractivePartial) -> bool:
    """Membership of a symmetric matrix in the extension interval.

    Route one: S_tilde is a symmetric extension with norm at most 1 (plus
    slack).  Route two: s_m <= S_tilde <= s_M.  The routes must agree;
    disagreement raises :class:`RouteMismatch`.  The returned verdict is
    route two.
    """
    tol = C.tol
    A = _square(S_tilde)
    if spectral_norm(A - A.T) > tol.residual * max(spectral_norm(A), 1.0):
        raise NotSymmetric("candidate must be symmetric")
    A = sym(A)
    iv = extremal_extensions(C)

    direct = _extends(A, C) and spectral_norm(A) <= 1.0 + tol.residual
    ordered = loewner_leq(iv.s_m, A, tol) and loewner_leq(A, iv.s_M, tol)
    if direct != ordered:
        raise RouteMismatch(
            f"direct extension test says {direct}, interval order says {ordered}"
        )
    return ordered


def sup_qform(C: ContractivePartial, g) -> float:
    """Supremum of |<Sf, g>|^2 over f in D with ||f||^2 - ||Sf||^2 <= 1.

    With M = I - image^T image and v = image^T g the supremum is
    v^T M^+ v when v lies in ran M and infinite otherwise.  Returns
    ``math.inf`` in the infinite case.
    """
    tol = C.tol
    x = as_vector(g, C.ambient_dim)
    if C.dom_dim == 0:
        return 0.0
    J = C.image
    M = sym(np.eye(C.dom_dim) - J.T @ J)
    v = J.T @ x
    resid = v - M @ (pinv(M, tol) @ v)
    # same shared rank cutoff that governs every range decision
    if np.linalg.norm(resid) > tol.rank_rel * max(np.linalg.norm(v), 1.0):
        return math.inf
    return float(v @ pinv(M, tol) @ v)


def _norm_attained(C: ContractivePartial) -> bool:
    return C.operator_norm_on_d >= 1.0 - C.tol.residual


def uniqueness(C: ContractivePartial) -> bool:
    """Decide uniqueness of the norm-one self-adjoint extension, three ways.

    (1) the interval endpoints coincide;
    (2) ran(I - M)^(1/2) .cap. ran(I + M)^(1/2) .cap. D-perp is zero, where
        M is the interval midpoint (ranges read off eigenspaces of I +- M);
    (3) the supremum test is infinite for every nonzero vector of D-perp,
        checked on an orthonormal basis and on fixed-seed random
        combinations.

    Route (3) carries the theorem's meaning only when the contraction
    attains norm one on its domain; for strict contractions it is skipped.
    The evaluated routes must agree (:class:`RouteMismatch` otherwise) and
    the common verdict is returned.
    """
    tol = C.tol
    n = C.ambient_dim
    iv = extremal_extensions(C)

    gap = spectral_norm(iv.s_M - iv.s_m)
    route_gap = gap <= tol.residual * max(
        1.0, spectral_norm(iv.s_m), spectral_norm(iv.s_M)
    )

    mid = iv.midpoint()
    eye = np.eye(n)
    perp = C.domain().perp_basis()
    ran_minus = psd_range(eye - mid, tol, scale=1.0)
    ran_plus = psd_range(eye + mid, tol, scale=1.0)
    meet = range_intersect([ran_minus.basis, ran_plus.basis, perp], tol)
    route_range = meet.dim == 0

    verdicts = [route_gap, route_range]
    if _norm_attained(C):
        basis = perp
        probes = [basis[:, j] for j in range(basis.shape[1])]
        rng = np.random.default_rng(0)  # fixed: reports must be reproducible
        for _ in range(8 if basis.shape[1] > 1 else 0):
            c = rng.standard_normal(basis.shape[1])
            probes.append(basis @ (c / np.linalg.norm(c)))
        route_sup = all(math.isinf(sup_qform(C, g)) for g in probes)
        verdicts.append(route_sup)

    if any(v != verdicts[0] for v in verdicts):
        raise RouteMismatch(f"uniqueness routes disagree: {verdicts}")
    return verdicts[0]
