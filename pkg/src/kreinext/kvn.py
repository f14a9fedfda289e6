"""The Krein-von Neumann extension and its characterizations.

For an extendible partial operator with orthonormal domain basis Q, image J
and Gram matrix G, the minimal positive self-adjoint extension has the
closed form

    T_N = J G^+ J^T.

Minimality is with respect to the Loewner order (which coincides with the
form order for matrices).  The variational description of its quadratic
form, the extension characterization through form domination, and the
square-root range criterion for equality with T_N are provided as
independent routes so each can serve as an oracle for the others.
"""

from __future__ import annotations

import numpy as np

from .errors import NoExtension, NotExtension, NotPSD, PreconditionViolated
from .numerics import (
    DEFAULT_TOL,
    ToleranceProfile,
    as_vector,
    is_psd,
    loewner_leq,
    pinv,
    psd_range,
    range_leq,
    spectral_norm,
    sym,
    _square,
)
from .partial_op import PartialOperator, has_bounded_psd_extension

__all__ = [
    "kvn_extension",
    "qform_tn",
    "is_extension",
    "characterize_extension",
    "kvn_range_criterion",
    "verify_sandwich",
]


def kvn_extension(P: PartialOperator) -> np.ndarray:
    """Minimal positive self-adjoint extension T_N = J G^+ J^T.

    Raises
    ------
    NoExtension
        If the partial operator admits no positive self-adjoint extension.
    """
    ok, _ = has_bounded_psd_extension(P)
    if not ok:
        raise NoExtension("the partial operator has no positive extension")
    if P.dom_dim == 0:
        return np.zeros((P.ambient_dim, P.ambient_dim))
    return sym(P.image @ pinv(P.gram, P.tol) @ P.image.T)


def qform_tn(P: PartialOperator, g) -> float:
    """Quadratic form of T_N at g, evaluated without forming T_N.

    Returns v^T G^+ v with v = image^T g; equals g^T T_N g, and dominates
    every sampled quotient |<g, Th>|^2 / <Th, h>.
    """
    ok, _ = has_bounded_psd_extension(P)
    if not ok:
        raise NoExtension("the partial operator has no positive extension")
    x = as_vector(g, P.ambient_dim)
    if P.dom_dim == 0:
        return 0.0
    v = P.image.T @ x
    return float(v @ pinv(P.gram, P.tol) @ v)


def is_extension(S, P: PartialOperator, tol: ToleranceProfile | None = None) -> bool:
    """Direct test: S agrees with the prescribed action on the domain."""
    tol = tol or P.tol
    A = _square(S)
    if A.shape[0] != P.ambient_dim:
        return False
    res = spectral_norm(A @ P.dom_basis - P.image)
    return res <= tol.residual * max(spectral_norm(P.image), 1.0)


def characterize_extension(S, P: PartialOperator) -> bool:
    """Extension test by form domination instead of column agreement.

    A PSD matrix S extends the partial operator iff T_N <= S (Loewner) and
    the quadratic form of S on each domain basis direction does not exceed
    the prescribed energy form.  Given T_N <= S the difference of forms on
    the domain is PSD, so checking the diagonal directions suffices.

    Must agree with ``is_extension(S, P) and is_psd(S)`` on every input;
    the agreement is asserted by the test suite, not here.
    """
    tol = P.tol
    A = sym(S)
    if not is_psd(A, tol):
        raise NotPSD("candidate extension is not PSD")
    tn = kvn_extension(P)
    if not loewner_leq(tn, A, tol):
        return False
    scale = max(spectral_norm(P.gram), spectral_norm(A), 1.0)
    for j in range(P.dom_dim):
        q = P.dom_basis[:, j]
        if float(q @ A @ q) > float(P.gram[j, j]) + tol.residual * scale:
            return False
    return True


def kvn_range_criterion(S, P: PartialOperator) -> bool:
    """Square-root range test for S = T_N among the PSD extensions of P.

    Returns True iff ran S^(1/2) and ran T_N^(1/2) coincide (both range
    inclusions hold).  For PSD matrices these ranges equal the ranges of the
    matrices themselves, so they are read off eigenspaces directly.

    Raises
    ------
    NotPSD
        If S is not PSD.
    NotExtension
        If S does not extend the partial operator.
    """
    tol = P.tol
    A = sym(S)
    if not is_psd(A, tol):
        raise NotPSD("candidate is not PSD")
    if not is_extension(A, P):
        raise NotExtension("candidate does not extend the partial operator")
    tn = kvn_extension(P)
    scale = max(spectral_norm(A), spectral_norm(tn))
    ran_s = psd_range(A, tol, scale=scale)
    ran_t = psd_range(tn, tol, scale=scale)
    return range_leq(ran_s.basis, ran_t.basis, tol) and range_leq(
        ran_t.basis, ran_s.basis, tol
    )


def verify_sandwich(P: PartialOperator, R, S) -> bool:
    """Check that T_N <= S <= R with R an extension forces S to extend too.

    Under the preconditions the returned value is always True; a False
    return would falsify the sandwich principle.

    Raises
    ------
    PreconditionViolated
        If R is not a PSD extension or S is not squeezed between T_N and R.
    """
    tol = P.tol
    Rm = sym(R)
    Sm = sym(S)
    if not (is_psd(Rm, tol) and is_extension(Rm, P)):
        raise PreconditionViolated("R must be a PSD extension of the operator")
    if not is_psd(Sm, tol):
        raise PreconditionViolated("S must be PSD")
    tn = kvn_extension(P)
    if not (loewner_leq(tn, Sm, tol) and loewner_leq(Sm, Rm, tol)):
        raise PreconditionViolated("S must satisfy T_N <= S <= R")
    return is_extension(Sm, P)
