"""Seeded random constructions used by the verification battery and tests.

Everything takes an explicit ``numpy.random.Generator`` so that parallel or
repeated runs with the same seed reproduce the same instances bit for bit.
"""

from __future__ import annotations

import numpy as np

from .errors import BadShape
from .numerics import DEFAULT_TOL, ToleranceProfile, sqrt_psd, sym
from .partial_op import PartialOperator, make_partial
from .contractive import ContractivePartial, ExtensionInterval, make_contractive

__all__ = [
    "random_orthonormal",
    "random_psd",
    "random_symmetric",
    "random_well_conditioned",
    "random_partial",
    "random_contraction",
    "sample_psd_extension",
    "sample_interval_member",
]


def random_orthonormal(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """n x k matrix with orthonormal columns."""
    if not 0 <= k <= n:
        raise BadShape(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return np.zeros((n, 0))
    Q, R = np.linalg.qr(rng.standard_normal((n, k)))
    # fix signs so the factorization is unique
    return Q * np.sign(np.where(np.diag(R) == 0, 1.0, np.diag(R)))


def random_psd(
    rng: np.random.Generator, n: int, scale: float = 1.0, rank: int | None = None
) -> np.ndarray:
    """Random PSD matrix with eigenvalues in [0.1, 2] * scale on its support.

    Spectra are kept away from the rank-cutoff window so that eps-level
    arithmetic noise cannot masquerade as genuine spectrum; ``rank``
    prescribes an exact deficiency (the remaining eigenvalues are zero).
    """
    if n == 0:
        return np.zeros((0, 0))
    Q = random_orthonormal(rng, n, n)
    lam = rng.uniform(0.1, 2.0, size=n) * scale
    if rank is not None:
        lam[rank:] = 0.0
    return sym((Q * lam) @ Q.T)


def random_symmetric(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return sym(rng.standard_normal((n, n))) * scale


def random_well_conditioned(
    rng: np.random.Generator, n: int, m: int, smin: float = 0.3, smax: float = 2.0
) -> np.ndarray:
    """Full-rank n x m matrix with singular values in [smin, smax]."""
    r = min(n, m)
    U = random_orthonormal(rng, n, r)
    V = random_orthonormal(rng, m, r)
    return (U * rng.uniform(smin, smax, size=r)) @ V.T


def random_partial(
    rng: np.random.Generator,
    n: int,
    k: int,
    tol: ToleranceProfile = DEFAULT_TOL,
    degenerate: bool = False,
) -> PartialOperator:
    """Random positive symmetric partial operator on a k-dimensional domain.

    Healthy instances take the image from a random PSD matrix, which makes
    them extendible by construction.  With ``degenerate=True`` the Gram
    matrix receives an exact kernel direction whose image points out of the
    domain, which plants a certified obstruction (requires k >= 1, k < n).
    """
    Q = random_orthonormal(rng, n, k)
    if not degenerate:
        J = random_psd(rng, n, scale=float(rng.uniform(0.5, 2.0))) @ Q
        return make_partial(Q, J, tol)

    if k < 1 or k >= n:
        raise BadShape("degenerate instances require 1 <= k < n")
    V = random_orthonormal(rng, k, k)
    lam = rng.uniform(0.5, 2.0, size=k)
    lam[-1] = 0.0
    G = sym((V * lam) @ V.T)
    c = V[:, -1]
    v = rng.standard_normal(n)
    v -= Q @ (Q.T @ v)
    w = v / np.linalg.norm(v)
    J = Q @ G + np.outer(w, c)
    return make_partial(Q, J, tol)


def random_contraction(
    rng: np.random.Generator,
    n: int,
    k: int,
    tol: ToleranceProfile = DEFAULT_TOL,
    attain_norm: bool = True,
) -> ContractivePartial:
    """Random symmetric contraction on a k-dimensional domain.

    The generating symmetric matrix has eigenvalues in (-0.8, 0.8) plus,
    when ``attain_norm`` is set, one eigenvalue of +-1 whose eigenvector is
    put into the domain, so the restriction attains norm exactly one and no
    accidental spectrum sits near the unit circle.
    """
    if not 1 <= k <= n:
        raise BadShape(f"need 1 <= k <= n, got k={k}, n={n}")
    V = random_orthonormal(rng, n, n)
    lam = rng.uniform(-0.8, 0.8, size=n)
    if attain_norm:
        lam[0] = -1.0 if rng.uniform() < 0.5 else 1.0
    F = sym((V * lam) @ V.T)
    if attain_norm:
        cols = [V[:, 0]] + [rng.standard_normal(n) for _ in range(k - 1)]
        Q, R = np.linalg.qr(np.column_stack(cols))
        Q = Q * np.sign(np.where(np.diag(R) == 0, 1.0, np.diag(R)))
    else:
        Q = random_orthonormal(rng, n, k)
    return make_contractive(Q, F @ Q, tol)


def sample_psd_extension(
    rng: np.random.Generator, P: PartialOperator, tn: np.ndarray, scale: float = 1.0
) -> np.ndarray:
    """A PSD extension T_N + P_perp W P_perp with W random PSD.

    Every PSD extension has this form: the difference S - T_N is PSD and
    vanishes on the domain, hence is supported in its complement.
    """
    n = P.ambient_dim
    perp = np.eye(n) - P.dom_basis @ P.dom_basis.T
    W = random_psd(rng, n, scale=scale)
    return sym(tn + perp @ W @ perp)


def sample_interval_member(
    rng: np.random.Generator, iv: ExtensionInterval, tol: ToleranceProfile = DEFAULT_TOL
) -> np.ndarray:
    """A random member s_m + Z K Z^T of [s_m, s_M], with 0 <= K <= I.

    Z carries the genuine eigendirections of the gap s_M - s_m scaled by
    root eigenvalues; rooting the full gap instead would lift its noise
    eigenvalues from eps to sqrt(eps) and spoil the extension property of
    the sample.
    """
    gap = sym(iv.s_M - iv.s_m)
    w, V = np.linalg.eigh(gap)
    keep = w > tol.rank_rel * max(w.max(initial=0.0), 1.0)
    Z = V[:, keep] * np.sqrt(w[keep])
    r = Z.shape[1]
    if r == 0:
        return sym(iv.s_m.copy())
    U = random_orthonormal(rng, r, r)
    K = sym((U * rng.uniform(0.0, 1.0, size=r)) @ U.T)
    return sym(iv.s_m + Z @ K @ Z.T)
