"""Shorting a PSD matrix to a subspace.

The shorted operator of a PSD matrix S relative to a subspace D is
S - (S|_D)_N: subtract the minimal extension of the restriction.  It is the
largest PSD matrix below S whose range sits inside the orthogonal
complement of D, generalizes the Schur complement (which serves as the
independent oracle on coordinate subspaces), carries a variational formula
for its quadratic form, and its square-root range is ran S^(1/2)
intersected with that complement.

Restricting the minimal-extension map itself is not order monotone; the
required extra hypothesis (a square-root range inclusion) is implemented in
:func:`kvn_monotone_check`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainMismatch,
    NoExtension,
    NotPSD,
    OracleMismatch,
    PreconditionViolated,
    RangeIdentityViolated,
    ShapeMismatch,
)
from .numerics import (
    DEFAULT_TOL,
    Subspace,
    ToleranceProfile,
    as_vector,
    is_psd,
    loewner_leq,
    pinv,
    psd_range,
    range_intersect,
    range_leq,
    spectral_norm,
    sym,
    _frozen,
    _square,
)
from .partial_op import PartialOperator, has_bounded_psd_extension, make_partial
from .kvn import kvn_extension

__all__ = [
    "ShortedResult",
    "short_to",
    "shorted_qform",
    "shorted_root_range",
    "schur_oracle",
    "shorted_monotone_floor",
    "kvn_monotone_check",
]


@dataclass(frozen=True)
class ShortedResult:
    """Decomposition S = shorted + kvn_part relative to a subspace."""

    shorted: np.ndarray
    kvn_part: np.ndarray
    subspace: Subspace


def short_to(S, D: Subspace, tol: ToleranceProfile = DEFAULT_TOL) -> ShortedResult:
    """Short the PSD matrix S to the subspace D.

    The restriction of S to D is always extendible (S itself extends it),
    so the decomposition exists unconditionally for PSD input.
    """
    A = sym(S)
    if not is_psd(A, tol):
        raise NotPSD("only PSD matrices can be shorted")
    if D.ambient_dim != A.shape[0]:
        raise ShapeMismatch("subspace and matrix dimensions differ")
    restriction = make_partial(D.basis, A @ D.basis, tol)
    part = kvn_extension(restriction)
    return ShortedResult(_frozen(sym(A - part)), _frozen(part), D)


def shorted_qform(S, D: Subspace, h, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    """Quadratic form of the shorted matrix at h, with a built-in oracle.

    The value is read off the shorted matrix; independently the variational
    description inf over f in D of <S(f+h), f+h> is minimized in closed form
    (minimizer c* = -(B^T S B)^+ B^T S h).  A discrepancy beyond the
    residual tolerance raises :class:`OracleMismatch`.
    """
    A = sym(S)
    x = as_vector(h, A.shape[0])
    result = short_to(A, D, tol)
    value = float(x @ result.shorted @ x)

    B = D.basis
    if B.size:
        inner = B.T @ A @ B
        c = -pinv(inner, tol) @ (B.T @ (A @ x))
        f = B @ c + x
    else:
        f = x
    oracle = float(f @ A @ f)

    scale = max(abs(value), abs(oracle), float(x @ A @ x), 1.0)
    if abs(value - oracle) > tol.residual * scale:
        raise OracleMismatch(
            f"matrix form {value!r} and variational form {oracle!r} disagree"
        )
    return value


def shorted_root_range(S, D: Subspace, tol: ToleranceProfile = DEFAULT_TOL) -> Subspace:
    """Range of the square root of the shorted matrix, verified two ways.

    Route one reads the eigenspaces of the shorted matrix (for PSD M the
    ranges of M and M^(1/2) agree).  Route two intersects ran S^(1/2) with
    the orthogonal complement of D.  Disagreement in rank or mutual
    inclusion raises :class:`RangeIdentityViolated`.
    """
    A = sym(S)
    result = short_to(A, D, tol)
    scale = max(spectral_norm(A), 1.0)
    direct = psd_range(result.shorted, tol, scale=scale)

    ran_root_s = psd_range(A, tol, scale=scale)
    meet = range_intersect([ran_root_s.basis, D.perp_basis()], tol)

    same = (
        direct.dim == meet.dim
        and range_leq(direct.basis, meet.basis, tol)
        and range_leq(meet.basis, direct.basis, tol)
    )
    if not same:
        raise RangeIdentityViolated(
            f"direct root range (dim {direct.dim}) does not match "
            f"ran S^(1/2) .cap. D-perp (dim {meet.dim})"
        )
    return direct


def schur_oracle(S, p: int, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Generalized Schur complement, embedded back into n x n.

    Partition S as [[A, B], [B^T, C]] with A of size p; return
    [[0, 0], [0, C - B^T A^+ B]].  Independent oracle for shorting to the
    span of the first p coordinates.
    """
    M = sym(S)
    n = M.shape[0]
    if not 0 <= p <= n:
        raise ShapeMismatch(f"block size {p} outside [0, {n}]")
    if not is_psd(M, tol):
        raise NotPSD("Schur oracle requires a PSD matrix")
    A = M[:p, :p]
    B = M[:p, p:]
    C = M[p:, p:]
    out = np.zeros((n, n))
    out[p:, p:] = C - B.T @ pinv(A, tol) @ B
    return sym(out)


def shorted_monotone_floor(S, T, D: Subspace, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """PSD floors below T supported in D-perp stay below the shorted matrix.

    Preconditions: S, T PSD, S <= T, and ran S inside the orthogonal
    complement of D.  Under them the returned value is always True.
    """
    Sm = sym(S)
    Tm = sym(T)
    if not (is_psd(Sm, tol) and is_psd(Tm, tol)):
        raise PreconditionViolated("S and T must be PSD")
    if not loewner_leq(Sm, Tm, tol):
        raise PreconditionViolated("S <= T must hold")
    if not range_leq(Sm, D.perp_basis(), tol):
        raise PreconditionViolated("ran S must lie in the complement of D")
    return loewner_leq(Sm, short_to(Tm, D, tol).shorted, tol)


def kvn_monotone_check(Ps: PartialOperator, Pt: PartialOperator) -> bool:
    """Two-part test for minimal-extension monotonicity S_N <= T_N.

    Form domination on the shared domain alone does not suffice (the
    minimal extension is not order monotone); together with the inclusion
    of square-root ranges it is equivalent to S_N <= T_N.  Returns the
    conjunction of the two parts; the equivalence with the direct Loewner
    comparison is asserted by the test suite.
    """
    tol = Ps.tol
    if Ps.ambient_dim != Pt.ambient_dim:
        raise DomainMismatch("operators live in different ambient spaces")
    same_domain = range_leq(Ps.dom_basis, Pt.dom_basis, tol) and range_leq(
        Pt.dom_basis, Ps.dom_basis, tol
    )
    if not same_domain:
        raise DomainMismatch("operators are not given on the same subspace")
    ok_s, _ = has_bounded_psd_extension(Ps)
    ok_t, _ = has_bounded_psd_extension(Pt)
    if not (ok_s and ok_t):
        raise NoExtension("both operators must be extendible")

    # express the second Gram in the coordinates of the first
    M = Pt.dom_basis.T @ Ps.dom_basis
    gram_t = sym(M.T @ Pt.gram @ M)
    form_dominates = loewner_leq(Ps.gram, gram_t, tol)

    sn = kvn_extension(Ps)
    tn = kvn_extension(Pt)
    scale = max(spectral_norm(sn), spectral_norm(tn))
    ran_s = psd_range(sn, tol, scale=scale)
    ran_t = psd_range(tn, tol, scale=scale)
    roots_nested = range_leq(ran_s.basis, ran_t.basis, tol)

    return form_dominates and roots_nested
