"""Edge and leader modifications of directed trees and their effect on the norm."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import GraphError, NotOnPathError, NotTreeError
from .graph import Edge, LeaderGraph, grounded_laplacian, is_follower_tree
from .hinf import hinf_value
from .spectral import RankOneUpdate, inverse, sherman_morrison_update

DECREASES = "decreases_hinf"
INCREASES = "increases_hinf"
UNCLASSIFIED = "unclassified"

SAME_PATH_FORWARD = "non_interfering_same_path_no_cycle"
SAME_PATH_BACKWARD = "creates_cycle_in_path"
OUT_OF_SCOPE = "outside_theorem_scope"


@dataclass(frozen=True)
class LeaderRootedPath:
    nodes: tuple[int, ...]
    root_leader: int

    def position(self, v: int) -> int:
        try:
            return self.nodes.index(v)
        except ValueError:
            raise NotOnPathError(f"node {v} is not on path {self.nodes}") from None

    def __contains__(self, v) -> bool:
        return v in self.nodes


@dataclass(frozen=True)
class Classification:
    classification: str
    reason: str
    path: Optional[LeaderRootedPath] = None


@dataclass(frozen=True)
class EdgeEffectReport:
    edge: Edge
    classification: str
    reason: str
    hinf_before: float
    hinf_after: float
    prediction_confirmed: Optional[bool]
    inverse_shift: tuple[float, float]

    def to_json(self) -> dict:
        return {
            "edge": list(self.edge),
            "classification": self.classification,
            "reason": self.reason,
            "hinf_before": self.hinf_before,
            "hinf_after": self.hinf_after,
            "prediction_confirmed": self.prediction_confirmed,
            "inverse_shift": list(self.inverse_shift),
        }


def _require_tree(g: LeaderGraph) -> None:
    if not g.directed:
        raise GraphError("expected a directed graph")
    if not is_follower_tree(g):
        raise NotTreeError("follower subgraph is not a tree")


def leader_rooted_paths(g: LeaderGraph) -> list[LeaderRootedPath]:
    """All directed follower paths from a leader's neighbour to a leaf.

    A leaf has exactly one in-neighbour and no out-neighbours.  Maximal
    paths that stop at a sink with several in-neighbours are not
    leader-rooted.  Paths starting at different leader neighbours may
    overlap.
    """
    _require_tree(g)
    leaders = g.leaders
    succ = {v: sorted(g.out_neighbors[v] - leaders) for v in g.followers}
    paths = []
    for start in g.followers:
        feeding = g.in_neighbors[start] & leaders
        if not feeding:
            continue
        root = min(feeding)
        stack = [(start,)]
        while stack:
            p = stack.pop()
            nxt = succ[p[-1]]
            if not nxt:
                if len(g.in_neighbors[p[-1]]) == 1:
                    paths.append(LeaderRootedPath(p, root))
            stack.extend(p + (c,) for c in reversed(nxt))
    return paths


def interfering(path: Sequence[int] | LeaderRootedPath, e1: Edge, e2: Edge) -> bool:
    """Whether two added edges on a path interfere.

    With ``(i, j)`` the edge whose tail comes first and ``(k, h)`` the
    other, they interfere iff ``j`` lies strictly beyond ``k``.  Edges
    that only share an endpoint do not interfere.
    """
    if not isinstance(path, LeaderRootedPath):
        path = LeaderRootedPath(tuple(path), -1)
    a, b = sorted((e1, e2), key=lambda e: path.position(e[0]))
    path.position(b[1])
    return path.position(a[1]) > path.position(b[0])


def _forward_on(path: LeaderRootedPath, e: Edge) -> bool:
    return e[0] in path and e[1] in path and path.position(e[0]) < path.position(e[1])


def classify_edge_addition(g: LeaderGraph, existing_additions: Iterable[Edge],
                           candidate: Edge) -> Classification:
    """Predict the sign of the norm change when ``candidate`` is added to a tree.

    ``g`` is the original tree and ``existing_additions`` the edges already
    added to it.  Only same-path additions are classified: forward edges
    that interfere with no existing addition decrease the norm, a backward
    (cycle-creating) edge on an otherwise unmodified tree increases it.
    """
    _require_tree(g)
    existing = [tuple(e) for e in existing_additions]
    candidate = tuple(candidate)
    for v in candidate:
        if v in g.leaders:
            raise GraphError(f"candidate endpoint {v} is a leader")
    g.with_edges(existing + [candidate])  # duplicate / anti-parallel / range checks

    on_path = [p for p in leader_rooted_paths(g) if candidate[0] in p and candidate[1] in p]
    if not on_path:
        return Classification(UNCLASSIFIED, OUT_OF_SCOPE)
    if not _forward_on(on_path[0], candidate):
        if existing:
            return Classification(UNCLASSIFIED, OUT_OF_SCOPE)
        return Classification(INCREASES, SAME_PATH_BACKWARD, on_path[0])
    for p in on_path:
        added = existing + [candidate]
        if not all(_forward_on(p, e) for e in added):
            continue
        if any(interfering(p, added[x], added[y])
               for x in range(len(added)) for y in range(x + 1, len(added))):
            continue
        return Classification(DECREASES, SAME_PATH_FORWARD, p)
    return Classification(UNCLASSIFIED, OUT_OF_SCOPE)


def apply_edge_and_measure(g: LeaderGraph, candidate: Edge,
                           existing_additions: Iterable[Edge] = ()) -> EdgeEffectReport:
    """Classify ``candidate`` and measure the actual norm before and after.

    The updated inverse comes from a Sherman-Morrison step on the old one;
    the norms use fresh singular value computations.
    """
    existing = [tuple(e) for e in existing_additions]
    cls = classify_edge_addition(g, existing, candidate)
    before = g.with_edges(existing)
    after = before.with_edges([tuple(candidate)])
    Lb = grounded_laplacian(before)
    La = grounded_laplacian(after)
    idx = Lb.index
    inv_before = inverse(Lb.matrix)
    inv_after = sherman_morrison_update(inv_before, RankOneUpdate(idx[candidate[1]], idx[candidate[0]]))
    shift = inv_after - inv_before
    h0 = hinf_value(Lb.matrix, "directed")
    h1 = hinf_value(La.matrix, "directed")
    if cls.classification == DECREASES:
        confirmed = h1 < h0
    elif cls.classification == INCREASES:
        confirmed = h1 > h0
    else:
        confirmed = None
    return EdgeEffectReport(tuple(candidate), cls.classification, cls.reason, h0, h1,
                            confirmed, (float(shift.min()), float(shift.max())))


def leader_addition_effect(g: LeaderGraph, follower: int, count: int = 1) -> tuple[float, float]:
    """Norm before and after attaching ``count`` fresh leaders to ``follower``."""
    before = hinf_value(grounded_laplacian(g).matrix, g.mode)
    g2 = g.with_leader(follower, count)
    after = hinf_value(grounded_laplacian(g2).matrix, g2.mode)
    return before, after
