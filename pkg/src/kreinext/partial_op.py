"""Positive symmetric operators given only on a subspace of R^n.

A partial operator is prescribed by a domain basis B (n x k) and an image
matrix J (n x k) whose j-th column is the action on the j-th basis column.
Construction orthonormalizes the domain, transports the image through the
same change of coordinates, and validates symmetry and positivity of the
induced bilinear form.

The central objects are the regularity subspace D_* (vectors g whose pairing
with the image is controlled by the energy form) and the Gram matrix
G = sym(B^T J), which plays the role of the energy inner product.  A
positive self-adjoint extension exists precisely when D_* is the whole
space, equivalently when the kernel of G is annihilated by the image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentAction,
    NotPositiveForm,
    NotSymmetric,
    ShapeMismatch,
)
from .numerics import (
    DEFAULT_TOL,
    Subspace,
    ToleranceProfile,
    as_matrix,
    is_psd,
    kernel_basis,
    pinv,
    range_intersect,
    spectral_norm,
    sym,
    _frozen,
)

__all__ = [
    "PartialOperator",
    "ExtendibilityReport",
    "make_partial",
    "dstar",
    "has_bounded_psd_extension",
    "extendibility_report",
]


@dataclass(frozen=True)
class PartialOperator:
    """A positive symmetric operator defined on a subspace of R^n.

    ``dom_basis`` has orthonormal columns spanning the domain; ``image``
    holds the action on those columns; ``gram`` is the symmetrized energy
    matrix dom_basis^T @ image.
    """

    ambient_dim: int
    dom_basis: np.ndarray
    image: np.ndarray
    gram: np.ndarray
    tol: ToleranceProfile

    @property
    def dom_dim(self) -> int:
        return self.dom_basis.shape[1]

    def domain(self) -> Subspace:
        return Subspace(self.ambient_dim, self.dom_basis)


def make_partial(dom_basis, image, tol: ToleranceProfile = DEFAULT_TOL) -> PartialOperator:
    """Validate and build a :class:`PartialOperator`.

    The input basis may be rank-deficient; the domain is orthonormalized by
    SVD and the image is re-expressed in the new coordinates.  Rejected
    inputs raise :class:`InconsistentAction` (the columns do not define a
    linear map), :class:`NotSymmetric`, or :class:`NotPositiveForm`.
    """
    B = as_matrix(dom_basis)
    J = as_matrix(image)
    if B.shape != J.shape:
        raise ShapeMismatch(
            f"domain basis is {B.shape}, image is {J.shape}; they must agree"
        )
    n, k = B.shape

    if k == 0 or spectral_norm(B) == 0.0:
        # empty or zero domain: the only consistent image is zero
        if k > 0 and spectral_norm(J) > tol.residual:
            raise InconsistentAction("zero domain vectors carry a nonzero image")
        empty = np.zeros((n, 0))
        return PartialOperator(n, _frozen(empty), _frozen(empty),
                               _frozen(np.zeros((0, 0))), tol)

    U, s, Vt = np.linalg.svd(B, full_matrices=False)
    r = int(np.count_nonzero(s > tol.rank_rel * s[0]))
    # coefficient vectors annihilating the basis must annihilate the image
    null = Vt[r:].T
    if null.size and spectral_norm(J @ null) > tol.residual * max(spectral_norm(J), 1.0):
        raise InconsistentAction(
            "image does not vanish on the kernel of the domain basis"
        )
    Q = U[:, :r]
    J2 = J @ (Vt[:r].T / s[:r])

    G0 = Q.T @ J2
    if spectral_norm(G0 - G0.T) > tol.residual * max(spectral_norm(G0), 1.0):
        raise NotSymmetric("the induced bilinear form is not symmetric")
    G = sym(G0)
    if not is_psd(G, tol):
        raise NotPositiveForm("the induced quadratic form takes negative values")
    return PartialOperator(n, _frozen(Q), _frozen(J2), _frozen(G), tol)


def _gram_range_projector(P: PartialOperator) -> np.ndarray:
    """Projector onto ran G, with the image norm as the cutoff floor.

    A bare relative cutoff would promote the noise of an exactly singular
    Gram to full rank and silently erase planted obstructions.
    """
    w, V = np.linalg.eigh(P.gram)
    lam = np.abs(w)
    cut = P.tol.rank_rel * max(lam.max(initial=0.0), spectral_norm(P.image))
    keep = V[:, lam > cut]
    return keep @ keep.T


def dstar(P: PartialOperator) -> Subspace:
    """Regularity subspace: vectors g with image^T g in the range of the Gram.

    Equals the whole space exactly when a positive self-adjoint extension
    exists; always contains the domain.
    """
    tol = P.tol
    J = P.image
    if P.dom_dim == 0:
        return Subspace.full(P.ambient_dim)
    A = (np.eye(P.dom_dim) - _gram_range_projector(P)) @ J.T
    # A is a residue of a cancellation; its own sigma_max may be pure noise
    return Subspace(P.ambient_dim, kernel_basis(A, tol, scale=spectral_norm(J)))


def _gram_kernel(P: PartialOperator) -> np.ndarray:
    scale = spectral_norm(P.image)
    return kernel_basis(P.gram, P.tol, scale=scale)


def _kernel_carries_image(P: PartialOperator) -> bool:
    """True iff the image vanishes on the kernel of the Gram matrix.

    The comparison is made between squared magnitudes: noise picked up by a
    true kernel direction scales like sqrt(eps) in the image, so the linear
    scale would misjudge healthy instances.
    """
    N = _gram_kernel(P)
    if N.size == 0:
        return True
    mass = spectral_norm(P.image @ N) ** 2
    scale = max(spectral_norm(P.image) ** 2, 1.0)
    return mass <= P.tol.residual * scale


def has_bounded_psd_extension(P: PartialOperator):
    """Decide extendibility and return ``(flag, gamma)``.

    ``gamma`` is the least constant with ||Tf||^2 <= gamma <Tf, f> on the
    domain, equal to the norm of the minimal extension; ``None`` when no
    extension exists.
    """
    if not _kernel_carries_image(P):
        return False, None
    G = P.gram
    J = P.image
    if P.dom_dim == 0:
        return True, 0.0
    w, V = np.linalg.eigh(G)
    lam = np.abs(w)
    cut = P.tol.rank_rel * max(lam.max(initial=0.0), spectral_norm(J))
    inv_root = np.where(w > cut, np.divide(1.0, np.sqrt(np.clip(w, 0.0, None)),
                                           where=w > 0), 0.0)
    R = V * inv_root  # columns scaled: R = V diag(w^-1/2 on the support)
    M = R.T @ (J.T @ J) @ R
    if M.size == 0:
        return True, 0.0
    gamma = float(np.linalg.eigvalsh(sym(M))[-1])
    return True, max(gamma, 0.0)


@dataclass(frozen=True)
class ExtendibilityReport:
    """Verdicts of the independently computed extendibility conditions.

    ``dstar_dense``: the regularity subspace is all of R^n.
    ``perp_ran_trivial``: its orthogonal complement meets the range of the
    image only in zero.
    ``pos_closable``: directions with vanishing energy form carry no image.
    The three are equivalent in exact arithmetic, so ``all_agree`` must hold
    on every valid instance.
    """

    dstar_dense: bool
    perp_ran_trivial: bool
    pos_closable: bool
    all_agree: bool


def extendibility_report(P: PartialOperator) -> ExtendibilityReport:
    """Evaluate the three extendibility conditions independently."""
    n = P.ambient_dim
    ds = dstar(P)
    cond_dense = ds.dim == n

    if P.dom_dim == 0:
        cond_perp = True
    else:
        meet = range_intersect([ds.perp_basis(), P.image], P.tol)
        cond_perp = meet.dim == 0

    cond_closable = _kernel_carries_image(P)

    agree = cond_dense == cond_perp == cond_closable
    return ExtendibilityReport(cond_dense, cond_perp, cond_closable, agree)
