"""Command-line harness.

Exit codes:
    0  success
    1  parse or validation error
    2  mathematically infeasible (no extension / no PSD solution); the
       report is still printed -- this is an answer, not a tool failure
    3  an oracle check failed (a bug or a tolerance breach)

Subcommands ``check``, ``kvn``, ``short``, ``interval``, ``unique``,
``solve`` and ``verify-all`` read an instance file (``-`` for stdin) and
print a report; ``gen`` emits a deterministic random instance.

Tolerance precedence: ``--tol-*`` flags, then the instance's own
``tolerances`` section, then the profile file named by the
``KREINEXT_TOLERANCES`` environment variable (three whitespace-separated
positive floats: rank_rel psd_slack residual), then built-in defaults.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import KreinextError, NoExtension, NotSolvable, ParseError
from .generate import KINDS, gen_instance
from .harness import COMMANDS, run_command
from .instance import parse_instance, render_instance
from .numerics import DEFAULT_TOL, ToleranceProfile

ENV_TOLERANCES = "KREINEXT_TOLERANCES"


def _read_instance(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read instance file {path!r}: {exc}") from exc


def _env_profile() -> ToleranceProfile | None:
    path = os.environ.get(ENV_TOLERANCES)
    if not path:
        return None
    try:
        with open(path, "r", encoding="utf-8") as handle:
            tokens = handle.read().split()
    except OSError as exc:
        raise ParseError(f"cannot read tolerance profile {path!r}: {exc}") from exc
    if len(tokens) != 3:
        raise ParseError(
            f"tolerance profile {path!r} must hold exactly three numbers"
        )
    try:
        values = [float(t) for t in tokens]
        return ToleranceProfile(*values)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad tolerance profile {path!r}: {exc}") from exc


def _resolve_tolerances(args, inst) -> ToleranceProfile:
    base = inst.tolerances or _env_profile() or DEFAULT_TOL
    overrides = {}
    if args.tol_rank is not None:
        overrides["rank_rel"] = args.tol_rank
    if args.tol_psd is not None:
        overrides["psd_slack"] = args.tol_psd
    if args.tol_residual is not None:
        overrides["residual"] = args.tol_residual
    if not overrides:
        return base
    try:
        return ToleranceProfile(
            rank_rel=overrides.get("rank_rel", base.rank_rel),
            psd_slack=overrides.get("psd_slack", base.psd_slack),
            residual=overrides.get("residual", base.residual),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kreinext",
        description="Extension calculus for positive symmetric operators "
        "given on subspaces: existence tests, minimal extensions, shorted "
        "operators, contractive extension intervals, PSD matrix equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in COMMANDS:
        cmd = sub.add_parser(name, help=f"run the {name} analysis")
        cmd.add_argument("instance", help="instance file path, or - for stdin")
        cmd.add_argument("--tol-rank", type=float, default=None,
                         help="override the relative rank cutoff")
        cmd.add_argument("--tol-psd", type=float, default=None,
                         help="override the PSD slack")
        cmd.add_argument("--tol-residual", type=float, default=None,
                         help="override the residual tolerance")
        cmd.add_argument("--seed", type=int, default=None,
                         help="seed for sampling-based checks")
        cmd.add_argument("--samples", type=int, default=50,
                         help="sample count for sampling-based checks")

    gen = sub.add_parser("gen", help="generate a deterministic random instance")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("-n", "--dim", type=int, required=True,
                     help="ambient dimension (at most 64)")
    gen.add_argument("-k", "--rank", type=int, required=True,
                     help="domain dimension / column count")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--degenerate", action="store_true",
                     help="plant a certified obstruction")
    gen.add_argument("-o", "--output", default="-",
                     help="output path (default stdout)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        if args.command == "gen":
            inst = gen_instance(
                args.kind, args.dim, args.rank, args.seed, args.degenerate
            )
            text = render_instance(inst)
            if args.output == "-":
                sys.stdout.write(text)
            else:
                with open(args.output, "w", encoding="utf-8") as handle:
                    handle.write(text)
            return 0

        inst = parse_instance(_read_instance(args.instance))
        tol = _resolve_tolerances(args, inst)
        try:
            report = run_command(
                args.command, inst, tol=tol, seed=args.seed, samples=args.samples
            )
        except NoExtension as exc:
            sys.stderr.write(f"infeasible: {exc}\n")
            return 2
        except NotSolvable as exc:
            sys.stderr.write(f"infeasible: {exc}\n")
            return 2
        sys.stdout.write(report.render())
        if not report.all_oracles_pass:
            return 3
        if report.get_verdict("extension_exists") is False:
            return 2
        if report.get_verdict("solvable") is False:
            return 2
        return 0
    except KreinextError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
