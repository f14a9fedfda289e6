"""PSD solvability of the matrix equation S A = B and its minimal solution.

A PSD matrix S with S A = B exists iff the pairing form B^T A is (after
symmetrization) positive semidefinite, the assignment A x -> B x is well
defined, and directions with vanishing form carry no image.  When solvable,
the minimal solution in the Loewner order is

    S_N = B (sym(B^T A))^+ B^T,

the minimal positive extension of the partial operator A x -> B x.  When
the kernel condition fails, an explicit certificate vector witnesses the
obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSolvable, ShapeMismatch
from .numerics import (
    DEFAULT_TOL,
    ToleranceProfile,
    as_matrix,
    is_psd,
    kernel_basis,
    pinv,
    spectral_norm,
    sym,
)

__all__ = ["Solvability", "check_solvable", "solve_min"]


@dataclass(frozen=True)
class Solvability:
    """Itemized verdicts for PSD solvability of S A = B.

    ``certificate`` is present exactly when ``bounded_condition`` fails: a
    vector x with x^T sym(B^T A) x ~ 0 while B x is far from zero.
    """

    well_defined: bool
    symmetric_form: bool
    positive_form: bool
    bounded_condition: bool
    solvable: bool
    certificate: np.ndarray | None = None


def _pair_form(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return sym(B.T @ A)


def check_solvable(A, B, tol: ToleranceProfile = DEFAULT_TOL) -> Solvability:
    """Evaluate the solvability conditions for S A = B, S PSD."""
    Am = as_matrix(A)
    Bm = as_matrix(B)
    if Am.shape != Bm.shape:
        raise ShapeMismatch(f"A is {Am.shape}, B is {Bm.shape}; shapes must agree")

    scale_b = max(spectral_norm(Bm), 1.0)

    ker_a = kernel_basis(Am, tol)
    well_defined = (
        ker_a.size == 0
        or spectral_norm(Bm @ ker_a) <= tol.residual * scale_b
    )

    raw = Bm.T @ Am
    symmetric_form = spectral_norm(raw - raw.T) <= tol.residual * max(
        spectral_norm(raw), 1.0
    )

    W = _pair_form(Am, Bm)
    positive_form = is_psd(W, tol)

    # directions with vanishing form must carry no image; compare squared
    # magnitudes, as kernel noise enters the image at sqrt(eps) scale
    ker_w = kernel_basis(W, tol, scale=spectral_norm(Bm) * spectral_norm(Am))
    certificate = None
    if ker_w.size == 0:
        bounded = True
    else:
        mass = spectral_norm(Bm @ ker_w) ** 2
        bounded = mass <= tol.residual * max(spectral_norm(Bm) ** 2, 1.0)
        if not bounded:
            lengths = np.linalg.norm(Bm @ ker_w, axis=0)
            certificate = ker_w[:, int(np.argmax(lengths))].copy()

    solvable = well_defined and symmetric_form and positive_form and bounded
    if solvable:
        certificate = None
    return Solvability(
        well_defined=well_defined,
        symmetric_form=symmetric_form,
        positive_form=positive_form,
        bounded_condition=bounded,
        solvable=solvable,
        certificate=certificate,
    )


def solve_min(A, B, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Minimal PSD solution of S A = B.

    Raises
    ------
    NotSolvable
        When no PSD solution exists; the exception carries the
        :class:`Solvability` report (``exc.solvability``).
    """
    report = check_solvable(A, B, tol)
    if not report.solvable:
        raise NotSolvable(report)
    Am = as_matrix(A)
    Bm = as_matrix(B)
    W = _pair_form(Am, Bm)
    return sym(Bm @ pinv(W, tol) @ Bm.T)
