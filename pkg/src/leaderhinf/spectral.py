"""Dense spectral kernel for grounded Laplacians.

Extremal singular values come from the symmetric eigenproblem on
``M.T @ M``; Perron roots of M-matrices come from power iteration on
the inverse of each irreducible diagonal block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    NoConvergenceError,
    SingularError,
    SingularUpdateError,
    StructureViolatedError,
)

TOL = 1e-10
MAX_ITER = 10_000
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class SpectralResult:
    value: float
    vector: Optional[np.ndarray]
    residual: float


@dataclass(frozen=True)
class RankOneUpdate:
    """Edge ``j -> i`` between followers, as a change of row ``i``.

    ``direction='add'`` inserts the edge, ``'remove'`` deletes it.
    """

    i: int
    j: int
    direction: str = "add"

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("rank-one edge update needs i != j")
        if self.direction not in ("add", "remove"):
            raise ValueError(f"direction must be 'add' or 'remove', got {self.direction!r}")

    @property
    def sign(self) -> int:
        return 1 if self.direction == "add" else -1


def _as_square(M) -> np.ndarray:
    M = np.asarray(getattr(M, "matrix", M), dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    return M


def _is_symmetric(M: np.ndarray) -> bool:
    return np.allclose(M, M.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(M).max()))


def smallest_singular_value(M, tol: float = TOL) -> SpectralResult:
    """sigma_1(M) with its right singular vector.

    The value is returned as ``||M v||`` for the computed eigenvector ``v``
    of ``M.T @ M``, which is second-order accurate in the vector error.
    """
    M = _as_square(M)
    G = M.T @ M
    w, V = np.linalg.eigh(G)
    v = V[:, 0]
    sigma = float(np.linalg.norm(M @ v))
    if sigma < SINGULAR_TOL:
        raise SingularError(f"smallest singular value {sigma:.3e} is numerically zero")
    scale = max(float(w[-1]), 1.0)
    residual = float(np.linalg.norm(G @ v - sigma**2 * v)) / scale
    if residual > tol:
        raise NoConvergenceError(f"singular pair residual {residual:.3e} exceeds {tol:.1e}")
    return SpectralResult(sigma, v, residual)


def _irreducible_blocks(M: np.ndarray, strong: bool) -> list[np.ndarray]:
    n = M.shape[0]
    off = (M != 0) & ~np.eye(n, dtype=bool)
    ncomp, labels = connected_components(csr_matrix(off), directed=True,
                                         connection="strong" if strong else "weak")
    return [np.flatnonzero(labels == c) for c in range(ncomp)]


def _perron_power(B: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray]:
    """Perron root of ``B^-1`` for an irreducible M-matrix block ``B``.

    Stops once the Collatz-Wielandt bracket ``[min(y/x), max(y/x)]`` is
    narrower than ``tol`` relative to its upper end.
    """
    lu = lu_factor(B)
    x = np.ones(B.shape[0]) / np.sqrt(B.shape[0])
    for _ in range(max_iter):
        y = lu_solve(lu, x)
        if (y <= 0).any():
            raise StructureViolatedError("inverse of grounded block is not positive")
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        x = y / np.linalg.norm(y)
        if hi - lo <= tol * hi:
            return 0.5 * (lo + hi), x
    raise NoConvergenceError(f"power iteration did not converge in {max_iter} steps")


def smallest_eigenvalue(M, structure: str = "symmetric", tol: float = TOL,
                        max_iter: int = MAX_ITER) -> SpectralResult:
    """lambda_1(M) for a symmetric matrix or a grounded (M-matrix) Laplacian.

    ``structure='grounded'`` requires ``M^-1`` to be entrywise
    non-negative and returns ``1 / rho(M^-1)``, taking the minimum over
    the strongly connected diagonal blocks.  The eigenvector is only
    returned when ``M`` is irreducible.
    """
    M = _as_square(M)
    if structure == "symmetric":
        if not _is_symmetric(M):
            raise StructureViolatedError("matrix is not symmetric")
        w, V = np.linalg.eigh(M)
        v = V[:, 0]
        residual = float(np.linalg.norm(M @ v - w[0] * v)) / max(float(np.abs(w).max()), 1.0)
        if residual > tol:
            raise NoConvergenceError(f"eigenpair residual {residual:.3e} exceeds {tol:.1e}")
        return SpectralResult(float(w[0]), v, residual)
    if structure != "grounded":
        raise ValueError(f"unknown structure {structure!r}")

    Minv = inverse(M)
    if Minv.min() < -1e-12 * max(1.0, np.abs(Minv).max()):
        raise StructureViolatedError("inverse has negative entries; no Perron structure")
    best = np.inf
    best_vec = None
    blocks = _irreducible_blocks(M, strong=True)
    for idx in blocks:
        B = M[np.ix_(idx, idx)]
        if len(idx) == 1:
            lam, vec = float(B[0, 0]), np.ones(1)
        else:
            rho, vec = _perron_power(B, tol, max_iter)
            lam = 1.0 / rho
        if lam < best:
            best, best_vec = lam, vec
    if len(blocks) == 1:
        v = best_vec / np.linalg.norm(best_vec)
        residual = float(np.linalg.norm(M @ v - best * v)) / max(float(np.abs(M).max()), 1.0)
        return SpectralResult(float(best), v, residual)
    return SpectralResult(float(best), None, 0.0)


def perron_component_min(M, tol: float = 1e-9) -> float:
    """Smallest entry of a non-negative eigenvector for lambda_1, scaled so its max is 1.

    For a reducible matrix the eigenvector lives on the connected blocks
    attaining lambda_1 (within ``tol``); if some block does not attain it
    the minimum entry is 0.
    """
    M = _as_square(M)
    if not _is_symmetric(M):
        raise StructureViolatedError("matrix is not symmetric")
    lams, mins = [], []
    for idx in _irreducible_blocks(M, strong=False):
        B = M[np.ix_(idx, idx)]
        w, V = np.linalg.eigh(B)
        x = V[:, 0]
        x = x * np.sign(x[np.argmax(np.abs(x))])
        if x.min() < -1e-9 * np.abs(x).max():
            raise NoConvergenceError("Perron vector of irreducible block changes sign")
        x = np.clip(x, 0.0, None) / x.max()
        lams.append(float(w[0]))
        mins.append(float(x.min()))
    lam1 = min(lams)
    if any(lam > lam1 + tol * max(1.0, lam1) for lam in lams):
        return 0.0
    return min(mins)


def inverse(M) -> np.ndarray:
    M = _as_square(M)
    try:
        inv = np.linalg.inv(M)
    except np.linalg.LinAlgError:
        raise SingularError("matrix is singular") from None
    if not np.isfinite(inv).all():
        raise SingularError("matrix is singular")
    return inv


def sherman_morrison_update(M_inv, u: RankOneUpdate) -> np.ndarray:
    """Inverse of ``M ± e_i (e_i - e_j)^T`` given ``M^-1``."""
    Minv = np.asarray(M_inv, dtype=float)
    s = u.sign
    col = Minv[:, u.i]
    row = Minv[u.i, :] - Minv[u.j, :]
    denom = 1.0 + s * (Minv[u.i, u.i] - Minv[u.j, u.i])
    if abs(denom) < SINGULAR_TOL:
        raise SingularUpdateError(f"Sherman-Morrison denominator {denom:.3e} vanishes")
    return Minv - s * np.outer(col, row) / denom


def rank_one_matrix(n: int, u: RankOneUpdate) -> np.ndarray:
    """The dense update ``± e_i (e_i - e_j)^T`` itself, for direct checks."""
    D = np.zeros((n, n))
    D[u.i, u.i] = u.sign
    D[u.i, u.j] = -u.sign
    return D


def frequency_gain(L, omega: float) -> float:
    """Largest singular value of ``(j omega I + L)^-1``.

    Uses the real embedding ``[[L, -omega I], [omega I, L]]``, whose
    singular values are those of the complex matrix, each doubled.
    """
    L = _as_square(L)
    n = L.shape[0]
    W = omega * np.eye(n)
    A = np.block([[L, -W], [W, L]])
    return 1.0 / smallest_singular_value(A).value
