"""Deterministic pseudo-random instance generation for the file harness."""

from __future__ import annotations

import numpy as np

from .errors import BadShape
from .instance import InstanceFile
from .sampling import (
    random_orthonormal,
    random_psd,
    random_well_conditioned,
)

__all__ = ["gen_instance", "KINDS"]

KINDS = ("positive", "contraction", "psd_full", "equation")

MAX_DIM = 64


def _positive_arrays(rng: np.random.Generator, n: int, k: int, degenerate: bool):
    Q = random_orthonormal(rng, n, k)
    if not degenerate:
        S0 = random_psd(rng, n, scale=float(rng.uniform(0.5, 2.0)))
        return Q, S0 @ Q
    if k >= n:
        raise BadShape("degenerate positive instances require k < n")
    V = random_orthonormal(rng, k, k)
    lam = rng.uniform(0.5, 2.0, size=k)
    lam[-1] = 0.0
    G = (V * lam) @ V.T
    G = (G + G.T) / 2.0
    c = V[:, -1]
    v = rng.standard_normal(n)
    v -= Q @ (Q.T @ v)
    w = v / np.linalg.norm(v)
    return Q, Q @ G + np.outer(w, c)


def _contraction_arrays(rng: np.random.Generator, n: int, k: int):
    V = random_orthonormal(rng, n, n)
    lam = rng.uniform(-0.8, 0.8, size=n)
    lam[0] = -1.0 if rng.uniform() < 0.5 else 1.0
    F = (V * lam) @ V.T
    F = (F + F.T) / 2.0
    cols = [V[:, 0]] + [rng.standard_normal(n) for _ in range(k - 1)]
    Q, R = np.linalg.qr(np.column_stack(cols))
    Q = Q * np.sign(np.where(np.diag(R) == 0, 1.0, np.diag(R)))
    return Q, F @ Q


def _equation_arrays(rng: np.random.Generator, n: int, m: int, degenerate: bool):
    A = random_well_conditioned(rng, n, m)
    S0 = random_psd(rng, n)
    B = S0 @ A
    if not degenerate:
        return A, B
    if m >= n:
        raise BadShape("degenerate equation instances require k < n")
    W0 = A.T @ S0 @ A
    _, V = np.linalg.eigh((W0 + W0.T) / 2.0)
    x = V[:, 0]
    v = rng.standard_normal(n)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    v -= U @ (U.T @ v)
    w = v / np.linalg.norm(v)
    return A, B @ (np.eye(m) - np.outer(x, x)) + np.outer(w, x)


def gen_instance(
    kind: str, n: int, k: int, seed: int, degenerate: bool = False
) -> InstanceFile:
    """Deterministic random instance of the requested kind.

    ``kind`` is one of ``positive`` (partial operator, extendible by
    construction), ``contraction`` (norm attained on the domain),
    ``psd_full`` (PSD matrix plus a coordinate subspace, for shorting), or
    ``equation`` (planted solvable pair B = S0 A).  ``degenerate`` plants a
    certified obstruction; it applies to ``positive`` and ``equation``.
    """
    if kind not in KINDS:
        raise BadShape(f"unknown kind {kind!r}; choose from {KINDS}")
    if not (1 <= k <= n <= MAX_DIM):
        raise BadShape(f"need 1 <= k <= n <= {MAX_DIM}, got k={k}, n={n}")
    if degenerate and kind not in ("positive", "equation"):
        raise BadShape("degenerate instances exist for 'positive' and 'equation'")

    rng = np.random.default_rng(seed)
    if kind == "positive":
        Q, J = _positive_arrays(rng, n, k, degenerate)
        return InstanceFile(dim=n, domain=Q.T.copy(), image=J.T.copy(), seed=seed)
    if kind == "contraction":
        Q, J = _contraction_arrays(rng, n, k)
        return InstanceFile(dim=n, domain=Q.T.copy(), image=J.T.copy(), seed=seed)
    if kind == "psd_full":
        S = random_psd(rng, n, scale=float(rng.uniform(0.5, 2.0)))
        basis = np.eye(n)[:, :k]
        return InstanceFile(
            dim=n,
            domain=basis.T.copy(),
            image=(S @ basis).T.copy(),
            full_operator=S.copy(),
            seed=seed,
        )
    A, B = _equation_arrays(rng, n, k, degenerate)
    return InstanceFile(dim=n, equation_a=A.copy(), equation_b=B.copy(), seed=seed)
