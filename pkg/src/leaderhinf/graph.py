"""Leader-follower graphs: validation, degree statistics, grounded Laplacians."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    AlreadyUndirectedError,
    AntiParallelPairError,
    AssumptionViolatedError,
    DisconnectedError,
    DuplicateEdgeError,
    EmptyLeaderSetError,
    EmptySetError,
    GraphError,
    LeaderHasInEdgeError,
    NodeOutOfRangeError,
    SelfLoopError,
)

DIRECTED = "directed"
UNDIRECTED = "undirected"
MODES = (DIRECTED, UNDIRECTED)

Edge = tuple[int, int]


@dataclass(frozen=True)
class LeaderGraph:
    """Simple graph on nodes ``0..n-1`` with a designated leader set.

    A directed edge ``(i, j)`` means node ``j`` listens to node ``i``.
    Undirected edges are stored as ``(min, max)`` pairs.  Instances are
    immutable and validated on construction; prefer :func:`build_graph`,
    which also rejects duplicate entries in the input list.
    """

    n: int
    edges: frozenset[Edge]
    leaders: frozenset[int]
    mode: str = DIRECTED

    def __post_init__(self):
        if self.mode not in MODES:
            raise GraphError(f"unknown mode {self.mode!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphError(f"node count must be a positive integer, got {self.n!r}")
        if not self.leaders:
            raise EmptyLeaderSetError("at least one leader is required")
        for v in self.leaders:
            if not 0 <= v < self.n:
                raise NodeOutOfRangeError(f"leader {v} outside [0, {self.n})")
        for i, j in self.edges:
            for v in (i, j):
                if not 0 <= v < self.n:
                    raise NodeOutOfRangeError(f"edge ({i}, {j}) has node outside [0, {self.n})")
            if i == j:
                raise SelfLoopError(f"self-loop at node {i}")
            if self.mode == UNDIRECTED:
                if i > j:
                    raise GraphError(f"undirected edge ({i}, {j}) must be stored as (min, max)")
                if i in self.leaders and j in self.leaders:
                    raise LeaderHasInEdgeError(f"edge ({i}, {j}) joins two leaders")
            else:
                if (j, i) in self.edges:
                    raise AntiParallelPairError(f"edges ({i}, {j}) and ({j}, {i}) both present")
                if j in self.leaders:
                    raise LeaderHasInEdgeError(f"leader {j} has incoming edge from {i}")

    @property
    def directed(self) -> bool:
        return self.mode == DIRECTED

    @cached_property
    def followers(self) -> tuple[int, ...]:
        """Follower ids in ascending order (also the grounded Laplacian row order)."""
        return tuple(v for v in range(self.n) if v not in self.leaders)

    @cached_property
    def in_neighbors(self) -> dict[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for i, j in self.edges:
            nbrs[j].add(i)
            if not self.directed:
                nbrs[i].add(j)
        return {v: frozenset(s) for v, s in nbrs.items()}

    @cached_property
    def out_neighbors(self) -> dict[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for i, j in self.edges:
            nbrs[i].add(j)
            if not self.directed:
                nbrs[j].add(i)
        return {v: frozenset(s) for v, s in nbrs.items()}

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def with_edges(self, extra: Iterable[Edge]) -> "LeaderGraph":
        """Copy of this graph with ``extra`` edges added (validated)."""
        return build_graph(self.n, self.sorted_edges() + list(extra), self.leaders, self.mode)

    def with_leader(self, follower: int, count: int = 1) -> "LeaderGraph":
        """Copy with ``count`` fresh leader nodes, each feeding ``follower``."""
        if follower in self.leaders or not 0 <= follower < self.n:
            raise GraphError(f"{follower} is not a follower")
        new = list(range(self.n, self.n + count))
        edges = self.sorted_edges() + [(v, follower) if self.directed else (follower, v) for v in new]
        return build_graph(self.n + count, edges, set(self.leaders) | set(new), self.mode)


@dataclass(frozen=True)
class DegreeStats:
    """Per-follower degree counts, indexed like :attr:`LeaderGraph.followers`.

    ``in_deg`` counts all in-neighbours (leaders included), ``out_deg``
    counts out-neighbours that are followers and ``leader_deg`` counts
    leader in-neighbours.
    """

    followers: tuple[int, ...]
    in_deg: np.ndarray
    out_deg: np.ndarray
    leader_deg: np.ndarray
    boundary_S: int

    @property
    def gamma_max(self) -> int:
        return int(self.leader_deg.max())

    @property
    def gamma_min(self) -> int:
        return int(self.leader_deg.min())


@dataclass(frozen=True)
class GroundedLaplacian:
    matrix: np.ndarray
    order: tuple[int, ...]
    mode: str

    @property
    def index(self) -> dict[int, int]:
        """Node id -> row index."""
        return {v: k for k, v in enumerate(self.order)}

    def __len__(self):
        return len(self.order)


def build_graph(n: int, edges: Iterable[Edge], leaders: Iterable[int], mode: str = DIRECTED) -> LeaderGraph:
    """Validate and assemble a :class:`LeaderGraph`.

    Raises the specific :class:`~leaderhinf.errors.GraphError` subclass for
    each violated invariant.
    """
    edges = [(int(i), int(j)) for i, j in edges]
    leaders = frozenset(int(v) for v in leaders)
    if not leaders:
        raise EmptyLeaderSetError("at least one leader is required")
    if mode == UNDIRECTED:
        keys = [(min(i, j), max(i, j)) for i, j in edges]
    else:
        keys = edges
    dupes = [e for e, c in Counter(keys).items() if c > 1]
    if dupes:
        raise DuplicateEdgeError(f"duplicate edge {dupes[0]}")
    return LeaderGraph(int(n), frozenset(keys), leaders, mode)


def _adjacency(g: LeaderGraph, symmetric: bool) -> csr_matrix:
    rows, cols = [], []
    for i, j in g.edges:
        rows.append(i)
        cols.append(j)
        if symmetric or not g.directed:
            rows.append(j)
            cols.append(i)
    data = np.ones(len(rows))
    return csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


def reachable_from_leaders(g: LeaderGraph) -> np.ndarray:
    """Boolean mask of nodes reachable from some leader along edge directions."""
    dist = shortest_path(_adjacency(g, symmetric=False), unweighted=True,
                         directed=g.directed, indices=sorted(g.leaders))
    return np.isfinite(np.atleast_2d(dist)).any(axis=0)


def check_assumption1(g: LeaderGraph) -> bool:
    """True iff every follower is reachable from some leader."""
    return bool(reachable_from_leaders(g).all())


def degree_stats(g: LeaderGraph) -> DegreeStats:
    fol = g.followers
    leaders = g.leaders
    in_deg = np.array([len(g.in_neighbors[v]) for v in fol], dtype=int)
    leader_deg = np.array([len(g.in_neighbors[v] & leaders) for v in fol], dtype=int)
    out_deg = np.array([len(g.out_neighbors[v] - leaders) for v in fol], dtype=int)
    boundary = sum(1 for i, j in g.edges if (i in leaders) != (j in leaders))
    return DegreeStats(fol, in_deg, out_deg, leader_deg, boundary)


def grounded_laplacian(g: LeaderGraph) -> GroundedLaplacian:
    """Laplacian with leader rows and columns removed, followers in ascending id order."""
    if not check_assumption1(g):
        raise AssumptionViolatedError("some follower is unreachable from every leader")
    order = g.followers
    idx = {v: k for k, v in enumerate(order)}
    M = np.zeros((len(order), len(order)))
    for v, k in idx.items():
        nbrs = g.in_neighbors[v]
        M[k, k] = len(nbrs)
        for u in nbrs:
            if u in idx:
                M[k, idx[u]] = -1.0
    M.setflags(write=False)
    return GroundedLaplacian(M, order, g.mode)


def undirected_counterpart(g: LeaderGraph) -> LeaderGraph:
    if not g.directed:
        raise AlreadyUndirectedError("graph is already undirected")
    return build_graph(g.n, g.edges, g.leaders, UNDIRECTED)


def as_undirected(g: LeaderGraph) -> LeaderGraph:
    return g if not g.directed else undirected_counterpart(g)


def is_connected(g: LeaderGraph) -> bool:
    """Weak connectivity of the whole graph (leaders included)."""
    ncomp, _ = connected_components(_adjacency(g, symmetric=True), directed=False)
    return ncomp == 1


def distances_to(g: LeaderGraph, v: int) -> np.ndarray:
    """Unweighted shortest-path distance from every node to ``v``, edge directions ignored."""
    d = shortest_path(_adjacency(g, symmetric=True), unweighted=True, directed=False, indices=v)
    return np.asarray(d)


def closeness_centrality(g: LeaderGraph, v: int) -> float:
    """Sum of shortest-path distances from all nodes to ``v`` (the un-normalised form)."""
    if not 0 <= v < g.n:
        raise NodeOutOfRangeError(f"node {v} outside [0, {g.n})")
    d = distances_to(g, v)
    if not np.isfinite(d).all():
        raise DisconnectedError(f"not every node reaches {v} in the undirected counterpart")
    return float(d.sum())


def edge_boundary(g: LeaderGraph, X: Iterable[int]) -> int:
    """Number of edges leaving ``X`` (undirected: edges with exactly one end in ``X``)."""
    X = set(X)
    if not X:
        raise EmptySetError("boundary of the empty set is undefined here")
    if not X <= set(range(g.n)):
        raise NodeOutOfRangeError("set contains nodes outside the graph")
    if g.directed:
        return sum(1 for i, j in g.edges if i in X and j not in X)
    return sum(1 for i, j in g.edges if (i in X) != (j in X))


# -- follower subgraph classification --------------------------------------

def follower_edges(g: LeaderGraph) -> list[Edge]:
    return sorted((i, j) for i, j in g.edges if i not in g.leaders and j not in g.leaders)


def is_balanced(g: LeaderGraph) -> bool:
    """In-degree equals out-degree for every node of the follower-induced digraph."""
    if not g.directed:
        return True
    indeg: Counter = Counter()
    outdeg: Counter = Counter()
    for i, j in follower_edges(g):
        outdeg[i] += 1
        indeg[j] += 1
    return all(indeg[v] == outdeg[v] for v in g.followers)


def is_follower_tree(g: LeaderGraph) -> bool:
    """Follower-induced subgraph, directions ignored, is connected and acyclic.

    A forest with several components is *not* a tree.
    """
    fol = g.followers
    fe = follower_edges(g)
    if len(fe) != len(fol) - 1:
        return False
    if len(fol) == 1:
        return True
    idx = {v: k for k, v in enumerate(fol)}
    rows = [idx[i] for i, _ in fe]
    cols = [idx[j] for _, j in fe]
    A = csr_matrix((np.ones(len(fe)), (rows, cols)), shape=(len(fol), len(fol)))
    ncomp, _ = connected_components(A, directed=False)
    return ncomp == 1
