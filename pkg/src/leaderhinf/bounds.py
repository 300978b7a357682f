"""Graph-theoretic bounds on grounded-Laplacian spectra and H-infinity norms.

Every report pairs the exact target with named lower and upper bounds so
that callers (and the tests) can check the sandwich
``max(lower) <= target <= min(upper)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import (
    AssumptionViolatedError,
    DisconnectedError,
    GraphError,
    NotBalancedError,
    NotTreeError,
    TooLargeForBruteForceError,
)
from .graph import (
    LeaderGraph,
    as_undirected,
    check_assumption1,
    closeness_centrality,
    degree_stats,
    grounded_laplacian,
    is_balanced,
    is_connected,
    is_follower_tree,
    undirected_counterpart,
)
from .hinf import hinf_value
from .spectral import perron_component_min, smallest_eigenvalue, smallest_singular_value

SANDWICH_TOL = 1e-9
ISOPERIMETRIC_CAP = 20

SOURCES = {
    "inv_closeness": "reciprocal closeness centrality of the best leader",
    "gamma_min": "fewest leader neighbours of any follower",
    "perron_boundary": "average leader boundary times smallest Perron component",
    "isoperimetric": "minimum boundary-to-size ratio over follower subsets",
    "boundary_ratio": "leader edge boundary over follower count",
    "gamma_max": "most leader neighbours of any follower",
    "gershgorin": "Gershgorin-type row/column singular value bound",
    "rayleigh_uniform": "Rayleigh quotient at the uniform vector",
    "rayleigh_basis": "Rayleigh quotient at the best canonical basis vector",
    "symmetric_part": "inverse of the symmetric part's smallest eigenvalue",
    "twice_undirected": "twice the undirected counterpart's norm",
    "inv_min_indegree": "reciprocal of the smallest follower in-degree",
    "sqrt_undirected": "square root of the undirected counterpart's norm",
    "sqrt_closeness": "square root of the smallest leader closeness centrality",
}


@dataclass
class BoundsReport:
    target_name: str
    target: float
    lower: list[tuple[str, float]] = field(default_factory=list)
    upper: list[tuple[str, float]] = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    gamma_verdict: Optional["GammaVerdict"] = None

    @property
    def tight_lower(self) -> Optional[str]:
        return max(self.lower, key=lambda nv: nv[1])[0] if self.lower else None

    @property
    def tight_upper(self) -> Optional[str]:
        return min(self.upper, key=lambda nv: nv[1])[0] if self.upper else None

    def bound(self, name: str) -> float:
        for nm, val in self.lower + self.upper:
            if nm == name:
                return val
        raise KeyError(name)

    def violations(self, tol: float = SANDWICH_TOL) -> list[str]:
        """Names of bounds that fail to enclose the target."""
        bad = [nm for nm, v in self.lower if v > self.target + tol]
        bad += [nm for nm, v in self.upper if v < self.target - tol]
        return bad

    def to_json(self) -> dict:
        def entries(pairs):
            return [{"name": nm, "value": v, "source": SOURCES.get(nm, nm)} for nm, v in pairs]

        out = {
            "target": {"name": self.target_name, "value": self.target},
            "lower": entries(self.lower),
            "upper": entries(self.upper),
            "tight_lower": self.tight_lower,
            "tight_upper": self.tight_upper,
        }
        if self.extras:
            out["extras"] = {k: _jsonable(v) for k, v in self.extras.items()}
        if self.gamma_verdict is not None:
            out["gamma_verdict"] = self.gamma_verdict.to_json()
        return out


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _require_assumption1(g: LeaderGraph) -> None:
    if not check_assumption1(g):
        raise AssumptionViolatedError("some follower is unreachable from every leader")


# -- undirected -------------------------------------------------------------

def isoperimetric_min(g: LeaderGraph, cap: int = ISOPERIMETRIC_CAP,
                      chunk: int = 1 << 15) -> tuple[float, tuple[int, ...]]:
    """``min |dX| / |X|`` over nonempty follower subsets of an undirected graph.

    Exhaustive over all ``2^m - 1`` subsets, processed in vectorised chunks.
    Returns the minimum and one minimising subset.
    """
    g = as_undirected(g)
    fol = g.followers
    m = len(fol)
    if m > cap:
        raise TooLargeForBruteForceError(f"{m} followers exceeds the brute-force cap of {cap}")
    idx = {v: k for k, v in enumerate(fol)}
    deg = np.array([len(g.in_neighbors[v]) for v in fol], dtype=np.int64)
    inner = np.array([(idx[i], idx[j]) for i, j in g.edges if i in idx and j in idx],
                     dtype=np.int64).reshape(-1, 2)
    shifts = np.arange(m, dtype=np.int64)
    best, best_mask = np.inf, 0
    total = (1 << m) - 1
    for start in range(1, total + 1, chunk):
        masks = np.arange(start, min(start + chunk, total + 1), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(np.int64)
        size = bits.sum(axis=1)
        boundary = bits @ deg
        if len(inner):
            boundary -= 2 * (bits[:, inner[:, 0]] & bits[:, inner[:, 1]]).sum(axis=1)
        ratio = boundary / size
        k = int(np.argmin(ratio))
        if ratio[k] < best:
            best, best_mask = float(ratio[k]), int(masks[k])
    subset = tuple(v for k, v in enumerate(fol) if best_mask >> k & 1)
    return best, subset


def undirected_bounds(g: LeaderGraph, isoperimetric: str = "off") -> BoundsReport:
    """Bounds on ``lambda_1`` of the undirected grounded Laplacian.

    Directed inputs are replaced by their undirected counterpart.
    ``isoperimetric='brute_force'`` adds the exhaustive subset bound.
    """
    if isoperimetric not in ("off", "brute_force"):
        raise ValueError(f"isoperimetric must be 'off' or 'brute_force', got {isoperimetric!r}")
    gu = as_undirected(g)
    if not is_connected(gu):
        raise DisconnectedError("graph is not connected")
    L = grounded_laplacian(gu).matrix
    stats = degree_stats(gu)
    m = len(stats.followers)
    target = smallest_eigenvalue(L, "symmetric").value

    closeness = {v: closeness_centrality(gu, v) for v in sorted(gu.leaders)}
    ratio = stats.boundary_S / m
    x_min = perron_component_min(L)
    report = BoundsReport("lambda1_undirected", target)
    report.lower = [
        ("inv_closeness", 1.0 / min(closeness.values())),
        ("gamma_min", float(stats.gamma_min)),
        ("perron_boundary", ratio * x_min),
    ]
    upper = []
    if isoperimetric == "brute_force":
        iso, subset = isoperimetric_min(gu)
        upper.append(("isoperimetric", iso))
        report.extras["isoperimetric_subset"] = list(subset)
    upper += [("boundary_ratio", ratio), ("gamma_max", float(stats.gamma_max))]
    report.upper = upper
    report.extras["closeness"] = closeness
    report.extras["x_min"] = x_min
    return report


# -- directed ---------------------------------------------------------------

def directed_bounds(g: LeaderGraph) -> BoundsReport:
    """Bounds on ``sigma_1`` of the directed grounded Laplacian."""
    if not g.directed:
        raise GraphError("directed_bounds needs a directed graph")
    _require_assumption1(g)
    L = grounded_laplacian(g).matrix
    s = degree_stats(g)
    m = len(s.followers)
    lower = max(0.0, float(np.min(0.5 * (s.in_deg - s.out_deg + s.leader_deg))))
    report = BoundsReport("sigma1_directed", smallest_singular_value(L).value)
    report.lower = [("gershgorin", lower)]
    report.upper = [
        ("rayleigh_uniform", math.sqrt(float(np.sum(s.leader_deg**2)) / m)),
        ("rayleigh_basis", math.sqrt(float(np.min(s.in_deg**2 + s.out_deg)))),
    ]
    return report


class Verdict(str, Enum):
    GUARANTEED = "Guaranteed"
    IMPOSSIBLE = "Impossible"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class GammaVerdict:
    verdict: Verdict
    gamma: float
    reasons: tuple[str, ...]

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "gamma": self.gamma, "reasons": list(self.reasons)}


def certify_gamma(g: LeaderGraph, gamma: float) -> GammaVerdict:
    """Degree-only test of ``||G||_inf <= gamma`` for a directed graph.

    Ceilings and floors are taken exactly on the decimal value of
    ``gamma`` so that e.g. ``gamma=0.9`` gives ``floor(1/gamma^2) = 1``.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not g.directed:
        raise GraphError("certify_gamma needs a directed graph")
    _require_assumption1(g)
    s = degree_stats(g)
    m = len(s.followers)
    gf = Fraction(repr(float(gamma)))

    margin = int(np.min(s.in_deg - s.out_deg + s.leader_deg))
    need = math.ceil(2 / gf)
    sum_sq = int(np.sum(s.leader_deg**2))
    need_sum = math.floor(m / gf**2)
    basis = int(np.min(s.in_deg**2 + s.out_deg))
    need_basis = math.floor(1 / gf**2)
    need_gmax = math.floor(1 / gf)

    sufficient = margin >= need
    checks = [
        (sum_sq >= need_sum, f"sum Gamma_i^2 = {sum_sq} {'>=' if sum_sq >= need_sum else '<'} floor(m/gamma^2) = {need_sum}"),
        (basis >= need_basis, f"min(Delta_i^2 + delta_i) = {basis} {'>=' if basis >= need_basis else '<'} floor(1/gamma^2) = {need_basis}"),
        (s.gamma_max >= need_gmax, f"Gamma_max = {s.gamma_max} {'>=' if s.gamma_max >= need_gmax else '<'} floor(1/gamma) = {need_gmax}"),
    ]
    reasons = [f"sufficient: min(Delta_i - delta_i + Gamma_i) = {margin} "
               f"{'>=' if sufficient else '<'} ceil(2/gamma) = {need}"]
    reasons += ["necessary: " + text for _, text in checks]
    if sufficient:
        verdict = Verdict.GUARANTEED
    elif not all(ok for ok, _ in checks):
        verdict = Verdict.IMPOSSIBLE
    else:
        verdict = Verdict.INCONCLUSIVE
    return GammaVerdict(verdict, float(gamma), tuple(reasons))


def balanced_bound(g: LeaderGraph) -> BoundsReport:
    """Upper bounds on the directed norm when the follower digraph is balanced."""
    if not g.directed:
        raise GraphError("balanced_bound needs a directed graph")
    if not is_balanced(g):
        raise NotBalancedError("follower subgraph is not balanced")
    _require_assumption1(g)
    L = grounded_laplacian(g).matrix
    hd = hinf_value(L, "directed")
    hu = hinf_value(grounded_laplacian(undirected_counterpart(g)).matrix, "undirected")
    lam_sym = smallest_eigenvalue(L + L.T, "symmetric").value
    report = BoundsReport("hinf_directed", hd)
    report.upper = [("symmetric_part", 2.0 / abs(lam_sym)), ("twice_undirected", 2.0 * hu)]
    report.extras = {"hinf_directed": hd, "hinf_undirected": hu}
    return report


def tree_bounds(g: LeaderGraph, tol: float = SANDWICH_TOL) -> BoundsReport:
    """Bounds on the directed norm when the follower subgraph is a tree.

    ``extras['square_law']`` is the residual ``|hinf_d^2 - hinf_u|`` when
    every follower has exactly one in-neighbour (a single leader feeding
    the root of an arborescence), and ``None`` otherwise.  A residual above
    ``tol`` raises ``ArithmeticError``, as the two matrices then coincide.
    """
    if not g.directed:
        raise GraphError("tree_bounds needs a directed graph")
    if not is_follower_tree(g):
        raise NotTreeError("follower subgraph is not a tree")
    _require_assumption1(g)
    L = grounded_laplacian(g).matrix
    s = degree_stats(g)
    gu = undirected_counterpart(g)
    hd = hinf_value(L, "directed")
    hu = hinf_value(grounded_laplacian(gu).matrix, "undirected")
    closeness = {v: closeness_centrality(gu, v) for v in sorted(g.leaders)}

    report = BoundsReport("hinf_directed", hd)
    report.lower = [("inv_min_indegree", 1.0 / float(s.in_deg.min()))]
    report.upper = [
        ("sqrt_undirected", math.sqrt(hu)),
        ("sqrt_closeness", math.sqrt(min(closeness.values()))),
    ]
    square_law = None
    if len(g.leaders) == 1 and bool((s.in_deg == 1).all()):
        square_law = abs(hd**2 - hu)
        if square_law > tol * max(1.0, hu):
            raise ArithmeticError(f"single-leader square law off by {square_law:.3e}")
    report.extras = {"hinf_directed": hd, "hinf_undirected": hu,
                     "closeness": closeness, "square_law": square_law}
    return report
