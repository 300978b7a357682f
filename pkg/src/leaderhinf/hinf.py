"""H-infinity norm of the disturbed follower dynamics ``x' = -L_g x + w, z = x``.

The system is positive, so the norm equals the DC gain ``||L_g^-1||_2``:
``1 / sigma_1(L_g)`` for directed graphs and ``1 / lambda_1(L_g)`` for
undirected ones.  Leader states only add a constant input and never enter
the ``w -> z`` transfer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import AssumptionViolatedError, PositivityViolatedError
from .graph import LeaderGraph, check_assumption1, grounded_laplacian
from .spectral import frequency_gain, smallest_eigenvalue, smallest_singular_value

DC_GAIN = "dc_gain"
FREQUENCY_SWEEP = "frequency_sweep"


@dataclass(frozen=True)
class HinfReport:
    value: float
    mode: str
    method: str
    sweep_max_omega: Optional[float] = None
    sweep_argmax: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "mode": self.mode,
            "method": self.method,
            "argmax_omega": self.sweep_argmax,
        }


def default_grid(points: int = 200, lo: float = 1e-3, hi: float = 1e3) -> np.ndarray:
    """``points`` frequencies: ``omega = 0`` then log-spaced values in ``[lo, hi]``."""
    return np.concatenate([[0.0], np.logspace(np.log10(lo), np.log10(hi), points - 1)])


def hinf_value(L, mode: str) -> float:
    """DC-gain H-infinity norm for a grounded Laplacian matrix."""
    L = getattr(L, "matrix", L)
    if mode == "undirected":
        return 1.0 / smallest_eigenvalue(L, "symmetric").value
    return 1.0 / smallest_singular_value(L).value


def hinf_norm(g: LeaderGraph) -> HinfReport:
    if not check_assumption1(g):
        raise AssumptionViolatedError("some follower is unreachable from every leader")
    Lg = grounded_laplacian(g)
    return HinfReport(hinf_value(Lg.matrix, g.mode), g.mode, DC_GAIN)


def frequency_response(g: LeaderGraph, grid: Sequence[float]) -> np.ndarray:
    Lg = grounded_laplacian(g)
    return np.array([frequency_gain(Lg.matrix, w) for w in grid])


def hinf_verify_sweep(g: LeaderGraph, grid: Optional[Sequence[float]] = None,
                      rtol: float = 1e-8) -> HinfReport:
    """Brute-force ``sup_omega`` over a frequency grid, checked against the DC gain.

    ``sweep_argmax`` is the first grid frequency within ``rtol`` of the sweep
    maximum.  Raises :class:`PositivityViolatedError` if any grid point beats
    the DC gain by more than ``rtol``.
    """
    if not check_assumption1(g):
        raise AssumptionViolatedError("some follower is unreachable from every leader")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    gains = frequency_response(g, grid)
    dc = hinf_norm(g).value
    top = float(gains.max())
    if top > dc * (1.0 + rtol):
        k = int(np.argmax(gains))
        raise PositivityViolatedError(
            f"gain {top:.12g} at omega={grid[k]:.4g} exceeds DC gain {dc:.12g}")
    first = int(np.flatnonzero(gains >= top * (1.0 - rtol))[0])
    return HinfReport(top, g.mode, FREQUENCY_SWEEP, float(grid.max()), float(grid[first]))
