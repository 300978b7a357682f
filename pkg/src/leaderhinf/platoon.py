"""Velocity tracking in a platoon of double integrators.

Each follower applies ``q_i = sum_{j in N_i} (u_j - u_i)`` and the
reference vehicle holds ``u = u*``; the disturbance ``w`` enters the
acceleration.  The velocity error obeys the first-order consensus
dynamics, so its H-infinity norm is that of the grounded Laplacian.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import AssumptionViolatedError, BadParamsError, NotConvergedError, UnstableStepError
from .generators import directed_path
from .graph import LeaderGraph, check_assumption1, closeness_centrality, grounded_laplacian
from .hinf import hinf_value
from .spectral import inverse

BLOWUP = 1e12


@dataclass(frozen=True)
class ConstantDisturbance:
    """Constant acceleration offset per follower (scalar or one value per follower), m/s^2."""

    level: Union[float, Sequence[float]] = 0.1

    def __call__(self, t: float, m: int) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.level, dtype=float), (m,)).copy()


@dataclass(frozen=True)
class SinusoidDisturbance:
    """``amplitude * sin(frequency * t + phase)``; ``frequency`` in rad/s."""

    amplitude: Union[float, Sequence[float]]
    frequency: float
    phase: float = 0.0

    def __call__(self, t: float, m: int) -> np.ndarray:
        amp = np.broadcast_to(np.asarray(self.amplitude, dtype=float), (m,))
        return amp * np.sin(self.frequency * t + self.phase)


Disturbance = Optional[Union[ConstantDisturbance, SinusoidDisturbance]]


@dataclass(frozen=True)
class PlatoonConfig:
    """Simulation setup.

    Defaults: vehicles start 10 m apart in id order, followers at rest,
    ``dt = 0.01`` s over a 100 s horizon.
    """

    graph: LeaderGraph
    u_star: float = 14.0
    disturbance: Disturbance = None
    t_end: float = 100.0
    dt: float = 0.01
    initial_positions: Optional[Sequence[float]] = None
    initial_velocities: Optional[Sequence[float]] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise BadParamsError("dt must be positive")
        if self.t_end < self.dt:
            raise BadParamsError("t_end must be at least one step")
        n = self.graph.n
        for name in ("initial_positions", "initial_velocities"):
            val = getattr(self, name)
            if val is not None and len(val) != n:
                raise BadParamsError(f"{name} needs {n} entries")
        if self.initial_velocities is not None:
            for v in self.graph.leaders:
                if self.initial_velocities[v] != self.u_star:
                    raise BadParamsError(f"leader {v} must start at the reference velocity")

    def positions0(self) -> np.ndarray:
        if self.initial_positions is not None:
            return np.asarray(self.initial_positions, dtype=float)
        return np.linspace(0.0, -10.0 * (self.graph.n - 1), self.graph.n)

    def velocities0(self) -> np.ndarray:
        if self.initial_velocities is not None:
            return np.asarray(self.initial_velocities, dtype=float)
        u = np.zeros(self.graph.n)
        u[sorted(self.graph.leaders)] = self.u_star
        return u


@dataclass
class SimTrace:
    times: np.ndarray
    positions: np.ndarray  # vehicle x time
    velocities: np.ndarray  # vehicle x time
    velocity_error: np.ndarray
    followers: tuple[int, ...] = field(default=())

    def to_csv(self) -> str:
        n = self.positions.shape[0]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time"] + [f"p{i}" for i in range(n)] + [f"u{i}" for i in range(n)])
        for k, t in enumerate(self.times):
            row = [t, *self.positions[:, k], *self.velocities[:, k]]
            w.writerow([f"{x:.12g}" for x in row])
        return buf.getvalue()


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, x: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(t, x)
    k2 = f(t + dt / 2, x + dt / 2 * k1)
    k3 = f(t + dt / 2, x + dt / 2 * k2)
    k4 = f(t + dt, x + dt * k3)
    return x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _coupling(g: LeaderGraph) -> np.ndarray:
    """``K`` with ``q = K u``: follower rows are ``-Laplacian`` rows, leader rows zero."""
    K = np.zeros((g.n, g.n))
    for v in g.followers:
        nbrs = g.in_neighbors[v]
        K[v, v] = -len(nbrs)
        for j in nbrs:
            K[v, j] = 1.0
    return K


def simulate(cfg: PlatoonConfig) -> SimTrace:
    """Fixed-step RK4 integration of ``p' = u, u' = q + w``; sampled every step."""
    g = cfg.graph
    if not check_assumption1(g):
        raise AssumptionViolatedError("some follower is unreachable from every leader")
    n = g.n
    fol = np.array(g.followers)
    K = _coupling(g)
    dist = cfg.disturbance

    def f(t, x):
        u = x[n:]
        acc = K @ u
        if dist is not None:
            acc[fol] += dist(t, len(fol))
        return np.concatenate([u, acc])

    steps = int(round(cfg.t_end / cfg.dt))
    times = cfg.dt * np.arange(steps + 1)
    states = np.empty((2 * n, steps + 1))
    x = np.concatenate([cfg.positions0(), cfg.velocities0()])
    states[:, 0] = x
    for k in range(steps):
        x = rk4_step(f, times[k], x, cfg.dt)
        if not np.isfinite(x).all() or np.abs(x).max() > BLOWUP:
            raise UnstableStepError(f"state blew up at t={times[k + 1]:.4g}")
        states[:, k + 1] = x
    vel = states[n:]
    err = np.abs(vel[fol] - cfg.u_star).max(axis=0)
    return SimTrace(times, states[:n], vel, err, tuple(int(v) for v in fol))


@dataclass(frozen=True)
class SteadyStateCheck:
    analytic: np.ndarray
    simulated: np.ndarray
    max_deviation: float


def analytic_steady_state(g: LeaderGraph, disturbance: Disturbance) -> np.ndarray:
    """``L_g^-1 w``: follower velocity offset from the reference under constant ``w``."""
    m = len(g.followers)
    if disturbance is None:
        return np.zeros(m)
    if not isinstance(disturbance, ConstantDisturbance):
        raise BadParamsError("steady state needs a constant disturbance")
    return inverse(grounded_laplacian(g).matrix) @ disturbance(0.0, m)


def steady_state_error(cfg: PlatoonConfig, tol: float = 1e-4, tail: float = 0.05) -> SteadyStateCheck:
    """Analytic steady-state velocity error, cross-checked against the simulated tail.

    Raises :class:`NotConvergedError` when any sample in the last ``tail``
    fraction of the horizon is further than ``tol`` from the prediction.
    """
    analytic = analytic_steady_state(cfg.graph, cfg.disturbance)
    trace = simulate(cfg)
    start = int(np.floor((1.0 - tail) * (len(trace.times) - 1)))
    fol = list(trace.followers)
    sim = trace.velocities[fol, start:] - cfg.u_star
    dev = float(np.abs(sim - analytic[:, None]).max())
    if dev > tol:
        raise NotConvergedError(f"simulated tail deviates from analytic steady state by {dev:.3e}")
    return SteadyStateCheck(analytic, sim[:, -1].copy(), dev)


def probe_gain(g: LeaderGraph, omega: float = 0.01, dt: float = 0.05,
               settle_periods: float = 1.0, fit_periods: float = 1.0,
               u_star: float = 14.0) -> float:
    """Sinusoidal-probe estimate of the w -> velocity gain at ``omega``.

    Drives the platoon with ``v sin(omega t)`` along the DC principal input
    direction ``v``, fits sine and cosine amplitudes to the follower
    velocity errors over the last ``fit_periods`` and returns the phasor
    norm.  Starts at equilibrium.
    """
    Linv = inverse(grounded_laplacian(g).matrix)
    _, _, Vt = np.linalg.svd(Linv)
    v = np.abs(Vt[0])
    period = 2 * np.pi / omega
    cfg = PlatoonConfig(g, disturbance=SinusoidDisturbance(v, omega),
                        t_end=(settle_periods + fit_periods) * period, dt=dt,
                        initial_velocities=[u_star] * g.n, u_star=u_star)
    trace = simulate(cfg)
    keep = trace.times >= settle_periods * period
    t = trace.times[keep]
    e = trace.velocities[list(trace.followers)][:, keep] - cfg.u_star
    basis = np.column_stack([np.sin(omega * t), np.cos(omega * t)])
    coef, *_ = np.linalg.lstsq(basis, e.T, rcond=None)
    return float(np.linalg.norm(coef) / np.linalg.norm(v))


# -- leader placement ---------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    length: int
    placement: str
    hinf: float
    closeness_bound: float


def platoon_graph(length: int, placement: str) -> LeaderGraph:
    return directed_path(length, placement)


def leader_placement_sweep(lengths: Iterable[int], placements: Sequence[str] = ("end", "middle")) -> list[SweepRow]:
    """Directed-path norm and the closeness-centrality envelope per (length, placement)."""
    rows = []
    for length in lengths:
        if length < 1:
            raise BadParamsError("platoon length must be positive")
        for placement in placements:
            g = platoon_graph(length, placement)
            h = hinf_value(grounded_laplacian(g).matrix, "directed")
            bound = min(np.sqrt(closeness_centrality(g, v)) for v in g.leaders)
            rows.append(SweepRow(int(length), placement, h, float(bound)))
    return rows


def sweep_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["length", "placement", "hinf", "closeness_bound"])
    for r in rows:
        w.writerow([r.length, r.placement, f"{r.hinf:.12g}", f"{r.closeness_bound:.12g}"])
    return buf.getvalue()
