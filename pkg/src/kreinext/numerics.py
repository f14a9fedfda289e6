"""Tolerance-aware dense linear-algebra kernel.

Every rank, range, positivity, and ordering decision made anywhere in the
library is made here, against a single :class:`ToleranceProfile`, so that
the higher-level constructions cannot reach inconsistent verdicts about the
same matrix.

All symmetry-sensitive computations symmetrize their input via
``(M + M.T) / 2`` before decomposing; this removes accumulation noise, not
genuine asymmetry (genuinely asymmetric inputs are rejected upstream).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPSD, ShapeMismatch

__all__ = [
    "ToleranceProfile",
    "DEFAULT_TOL",
    "Subspace",
    "as_matrix",
    "as_vector",
    "sym",
    "spectral_norm",
    "rank_tol",
    "pinv",
    "is_psd",
    "sqrt_psd",
    "range_leq",
    "range_intersect",
    "loewner_leq",
    "form_order_leq",
    "range_basis",
    "kernel_basis",
    "psd_range",
]


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical decision thresholds used by every predicate.

    Attributes
    ----------
    rank_rel : float
        Relative singular-value cutoff for rank and kernel decisions.
    psd_slack : float
        Allowed negative eigenvalue, relative to the spectral norm, when
        testing positive semidefiniteness.
    residual : float
        Maximum relative residual accepted by equality and range tests.
    """

    rank_rel: float = 1e-10
    psd_slack: float = 1e-9
    residual: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "psd_slack", "residual"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0.0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOL = ToleranceProfile()


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def as_matrix(M) -> np.ndarray:
    """Coerce to a dense real matrix, rejecting NaN/Inf and wrong rank."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got an array of ndim {A.ndim}")
    if A.size and not np.isfinite(A).all():
        raise ShapeMismatch("matrix entries must be finite")
    return A


def as_vector(v, n: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-d vector, optionally of prescribed length."""
    x = np.asarray(v, dtype=float).reshape(-1)
    if x.size and not np.isfinite(x).all():
        raise ShapeMismatch("vector entries must be finite")
    if n is not None and x.size != n:
        raise ShapeMismatch(f"expected a vector of length {n}, got {x.size}")
    return x


def _square(M) -> np.ndarray:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


def sym(M) -> np.ndarray:
    """Symmetric part (M + M.T) / 2."""
    A = _square(M)
    return (A + A.T) / 2.0


def spectral_norm(M) -> float:
    """Largest singular value; 0 for empty matrices."""
    A = as_matrix(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def _singvals(A: np.ndarray) -> np.ndarray:
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def rank_tol(M, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Numerical rank: count of singular values above ``rank_rel * sigma_max``."""
    s = _singvals(as_matrix(M))
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def pinv(M, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD with the shared rank cutoff.

    Singular values at or below ``rank_rel * sigma_max`` are treated as zero,
    so the result is consistent with :func:`rank_tol` on the same input.
    """
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros((A.shape[1], A.shape[0]))
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((A.shape[1], A.shape[0]))
    inv = np.where(s > tol.rank_rel * s[0], np.divide(1.0, s, where=s > 0), 0.0)
    return (Vt.T * inv) @ U.T


def range_basis(M, tol: ToleranceProfile = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis of the column space.

    ``scale`` raises the cutoff floor for matrices that are themselves noise
    remnants of a larger computation (their own sigma_max is meaningless).
    """
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros((A.shape[0], 0))
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    cut = tol.rank_rel * max(s[0] if s.size else 0.0, scale)
    r = int(np.count_nonzero(s > cut))
    return U[:, :r]


def kernel_basis(M, tol: ToleranceProfile = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis of the (right) null space, with optional scale floor."""
    A = as_matrix(M)
    n = A.shape[1]
    if A.shape[0] == 0 or n == 0:
        return np.eye(n)
    _, s, Vt = np.linalg.svd(A, full_matrices=True)
    cut = tol.rank_rel * max(s[0] if s.size else 0.0, scale)
    r = int(np.count_nonzero(s > cut))
    return Vt[r:].T


@dataclass(frozen=True)
class Subspace:
    """A subspace of R^n stored as an orthonormal basis matrix (n x r)."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        B = as_matrix(self.basis)
        if B.shape[0] != self.ambient_dim:
            raise ShapeMismatch(
                f"basis has {B.shape[0]} rows, ambient dimension is {self.ambient_dim}"
            )
        if B.shape[1] > self.ambient_dim:
            raise ShapeMismatch("more basis vectors than the ambient dimension")
        if B.size and not np.allclose(B.T @ B, np.eye(B.shape[1]), atol=1e-8):
            raise ShapeMismatch("basis columns are not orthonormal")
        object.__setattr__(self, "basis", _frozen(B))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def perp_projector(self) -> np.ndarray:
        return np.eye(self.ambient_dim) - self.projector()

    def perp_basis(self) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement.

        Preferred over :meth:`perp_projector` for range decisions: the
        projector of a (nearly) full subspace is a noise matrix whose
        numerical range is meaningless, while the kernel of the transposed
        basis is exact.
        """
        return kernel_basis(self.basis.T)

    def contains(self, other: "Subspace", tol: ToleranceProfile = DEFAULT_TOL) -> bool:
        """True iff ``other`` is contained in this subspace."""
        if other.ambient_dim != self.ambient_dim:
            raise ShapeMismatch("subspaces live in different ambient spaces")
        return range_leq(other.basis, self.basis, tol)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((n, 0)))

    @classmethod
    def from_span(cls, M, tol: ToleranceProfile = DEFAULT_TOL) -> "Subspace":
        A = as_matrix(M)
        return cls(A.shape[0], range_basis(A, tol))


def psd_range(M, tol: ToleranceProfile = DEFAULT_TOL, scale: float = 0.0) -> Subspace:
    """Range of a PSD matrix, equivalently of its square root, from eigenspaces.

    Taking the root first would inflate noise eigenvalues from eps to
    sqrt(eps) and defeat the shared rank cutoff; for PSD M the ranges of M
    and M^(1/2) coincide, so the eigenspaces of M itself are decisive.
    """
    A = sym(M)
    n = A.shape[0]
    if n == 0:
        return Subspace.zero(0)
    w, V = np.linalg.eigh(A)
    lam = np.abs(w)
    cut = tol.rank_rel * max(lam.max(initial=0.0), scale)
    keep = lam > cut
    return Subspace(n, V[:, keep])


def is_psd(M, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """True iff the symmetric part has no eigenvalue below the relative slack."""
    A = sym(M)
    if A.size == 0:
        return True
    w = np.linalg.eigvalsh(A)
    norm = max(abs(w[0]), abs(w[-1]))
    return bool(w[0] >= -tol.psd_slack * max(norm, 1.0))


def sqrt_psd(M, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Symmetric PSD square root; eigenvalues within the slack are clamped to 0.

    Raises
    ------
    NotPSD
        If the input fails :func:`is_psd`.
    """
    A = sym(M)
    if not is_psd(A, tol):
        raise NotPSD("matrix has an eigenvalue below the allowed slack")
    if A.size == 0:
        return A.copy()
    w, V = np.linalg.eigh(A)
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.T


def range_leq(X, Y, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Range inclusion ran X <= ran Y, tested by projecting X off ran Y."""
    A = as_matrix(X)
    B = as_matrix(Y)
    if A.shape[0] != B.shape[0]:
        raise ShapeMismatch("matrices must have the same number of rows")
    if A.size == 0:
        return True
    Q = range_basis(B, tol)
    R = A - Q @ (Q.T @ A)
    return spectral_norm(R) <= tol.residual * max(spectral_norm(A), 1.0)


def range_intersect(Ms, tol: ToleranceProfile = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the intersection of the column spaces.

    Computed as the numerical kernel of the sum of complementary projectors;
    that sum is a normalized object (norm at most len(Ms)), so the cutoff
    carries an absolute floor of 1.
    """
    mats = [as_matrix(M) for M in Ms]
    if not mats:
        raise ShapeMismatch("need at least one matrix")
    n = mats[0].shape[0]
    for M in mats:
        if M.shape[0] != n:
            raise ShapeMismatch("matrices must share their row count")
    K = np.zeros((n, n))
    for M in mats:
        Q = range_basis(M, tol)
        K += np.eye(n) - Q @ Q.T
    w, V = np.linalg.eigh(sym(K))
    cut = tol.rank_rel * max(w.max(initial=0.0), 1.0)
    keep = w <= cut
    return Subspace(n, V[:, keep])


def loewner_leq(A, B, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Loewner order A <= B, i.e. B - A is positive semidefinite."""
    X = _square(A)
    Y = _square(B)
    if X.shape != Y.shape:
        raise ShapeMismatch("matrices must have equal shape")
    return is_psd(Y - X, tol)


def form_order_leq(A, B, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Form order on PSD matrices, by reversed resolvent comparison.

    A precedes B iff (I + B)^-1 <= (I + A)^-1 in the Loewner sense.  On
    everywhere-defined PSD matrices this coincides with :func:`loewner_leq`;
    the two implementations stay independent so the collapse can be asserted.

    Raises
    ------
    NotPSD
        If either input fails :func:`is_psd`.
    """
    X = sym(A)
    Y = sym(B)
    if X.shape != Y.shape:
        raise ShapeMismatch("matrices must have equal shape")
    if not is_psd(X, tol):
        raise NotPSD("first operand is not PSD")
    if not is_psd(Y, tol):
        raise NotPSD("second operand is not PSD")
    n = X.shape[0]
    eye = np.eye(n)
    res_a = np.linalg.solve(eye + X, eye)
    res_b = np.linalg.solve(eye + Y, eye)
    return loewner_leq(sym(res_b), sym(res_a), tol)
