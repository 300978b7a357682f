"""Deterministic generators for the graph families used in experiments and tests.

Random kinds take a ``seed`` and are reproducible.  Unless stated otherwise
followers are numbered ``0..m-1`` and leaders ``m..m+k-1``.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import BadParamsError
from .graph import DIRECTED, UNDIRECTED, LeaderGraph, build_graph


def _leader_index(length: int, leader) -> int:
    n = length + 1
    if leader == "end":
        return 0
    if leader == "middle":
        return n // 2
    if isinstance(leader, (int, np.integer)) and 0 <= leader < n:
        return int(leader)
    raise BadParamsError(f"leader position must be 'end', 'middle' or an index in [0, {n}), got {leader!r}")


def _path_edges(length: int, k: int) -> list[tuple[int, int]]:
    n = length + 1
    right = [(i, i + 1) for i in range(k, n - 1)]
    left = [(i, i - 1) for i in range(k, 0, -1)]
    return left + right


def directed_path(length: int, leader="end") -> LeaderGraph:
    """Platoon of ``length`` followers plus one leader, edges pointing away from the leader.

    Vehicles are numbered ``0..length`` in road order; ``leader`` is
    ``'end'`` (vehicle 0), ``'middle'`` (vehicle ``(length + 1) // 2``) or
    an explicit index.
    """
    if length < 1:
        raise BadParamsError("path needs at least one follower")
    k = _leader_index(length, leader)
    return build_graph(length + 1, _path_edges(length, k), {k}, DIRECTED)


def undirected_path(length: int, leader="end") -> LeaderGraph:
    if length < 1:
        raise BadParamsError("path needs at least one follower")
    k = _leader_index(length, leader)
    return build_graph(length + 1, _path_edges(length, k), {k}, UNDIRECTED)


def directed_cycle_plus_leader(k: int) -> LeaderGraph:
    """Directed cycle ``0 -> 1 -> ... -> k-1 -> 0`` with leader ``k`` feeding node 0."""
    if k < 3:
        raise BadParamsError("a directed cycle without anti-parallel edges needs k >= 3")
    edges = [(k, 0)] + [(i, (i + 1) % k) for i in range(k)]
    return build_graph(k + 1, edges, {k}, DIRECTED)


def _random_tree_edges(m: int, rng: np.random.Generator) -> tuple[list[tuple[int, int]], int]:
    """Random recursive tree on ``m`` nodes, edges oriented parent -> child."""
    perm = rng.permutation(m)
    edges = []
    for i in range(1, m):
        parent = int(rng.integers(0, i))
        edges.append((int(perm[parent]), int(perm[i])))
    return edges, int(perm[0])


def _attach_leaders(m: int, targets: list[int], follower_edges, mode) -> LeaderGraph:
    leader_edges = [(m + k, t) for k, t in enumerate(targets)]
    leaders = set(range(m, m + len(targets)))
    return build_graph(m + len(targets), list(follower_edges) + leader_edges, leaders, mode)


def directed_random_tree(n_followers: int, seed: int, n_leaders: int = 1,
                         orientation: str = "out") -> LeaderGraph:
    """Random directed tree on the followers.

    ``orientation='out'`` gives an arborescence whose root is fed by the
    first leader; extra leaders attach to uniformly chosen followers.
    ``orientation='random'`` orients every tree edge by a coin flip and
    gives each source follower a leader, so the leader count is at least
    the number of sources.
    """
    if n_followers < 1 or n_leaders < 1:
        raise BadParamsError("need at least one follower and one leader")
    if orientation not in ("out", "random"):
        raise BadParamsError(f"unknown orientation {orientation!r}")
    rng = np.random.default_rng(seed)
    edges, root = _random_tree_edges(n_followers, rng)
    if orientation == "out":
        targets = [root] + [int(t) for t in rng.integers(0, n_followers, n_leaders - 1)]
    else:
        edges = [(i, j) if rng.random() < 0.5 else (j, i) for i, j in edges]
        has_in = {j for _, j in edges}
        targets = [v for v in range(n_followers) if v not in has_in]
        extra = max(0, n_leaders - len(targets))
        targets += [int(t) for t in rng.integers(0, n_followers, extra)]
    return _attach_leaders(n_followers, targets, edges, DIRECTED)


def balanced_cycle_family(n_followers: int, seed: int, n_cycles: int = 2,
                          n_leaders: int = 1, max_tries: int = 200) -> LeaderGraph:
    """Balanced follower digraph built as a union of edge-disjoint directed cycles.

    The first cycle is Hamiltonian, so the follower subgraph is strongly
    connected and any leader placement satisfies reachability.  Extra
    cycles that would duplicate an edge or create an anti-parallel pair
    are redrawn (up to ``max_tries`` times, then skipped).
    """
    if n_followers < 3:
        raise BadParamsError("balanced cycle family needs at least 3 followers")
    if n_cycles < 1 or n_leaders < 1:
        raise BadParamsError("need at least one cycle and one leader")
    rng = np.random.default_rng(seed)
    perm = [int(v) for v in rng.permutation(n_followers)]
    edges = {(perm[i], perm[(i + 1) % n_followers]) for i in range(n_followers)}
    for _ in range(n_cycles - 1):
        for _ in range(max_tries):
            size = int(rng.integers(3, n_followers + 1))
            nodes = [int(v) for v in rng.choice(n_followers, size, replace=False)]
            cyc = {(nodes[i], nodes[(i + 1) % size]) for i in range(size)}
            if any(e in edges or (e[1], e[0]) in edges for e in cyc):
                continue
            edges |= cyc
            break
    targets = [int(t) for t in rng.integers(0, n_followers, n_leaders)]
    return _attach_leaders(n_followers, targets, sorted(edges), DIRECTED)


def _reach(m: int, edges, targets, directed: bool) -> set[int]:
    adj: dict[int, list[int]] = {v: [] for v in range(m)}
    for i, j in edges:
        adj[i].append(j)
        if not directed:
            adj[j].append(i)
    seen = set(targets)
    queue = deque(targets)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def _random_graph(n_followers, seed, p, n_leaders, directed):
    if n_followers < 1 or n_leaders < 1:
        raise BadParamsError("need at least one follower and one leader")
    if not 0.0 <= p <= 1.0:
        raise BadParamsError("edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    tree, _ = _random_tree_edges(n_followers, rng)
    pairs = {(min(i, j), max(i, j)) for i, j in tree}
    edges = []
    for i, j in tree:
        edges.append((i, j) if not directed or rng.random() < 0.5 else (j, i))
    for i in range(n_followers):
        for j in range(i + 1, n_followers):
            if (i, j) not in pairs and rng.random() < p:
                edges.append((i, j) if not directed or rng.random() < 0.5 else (j, i))
    targets = [int(t) for t in rng.integers(0, n_followers, n_leaders)]
    # top up leader edges until every follower is reachable
    while True:
        missing = sorted(set(range(n_followers)) - _reach(n_followers, edges, targets, directed))
        if not missing:
            break
        targets.append(int(rng.choice(missing)))
    return _attach_leaders(n_followers, targets, edges, DIRECTED if directed else UNDIRECTED)


def random_directed(n_followers: int, seed: int, p: float = 0.3, n_leaders: int = 1) -> LeaderGraph:
    """Weakly connected random digraph on the followers (random tree plus G(m, p) extras).

    If the requested leaders leave followers unreachable, further leaders
    are attached until reachability holds.
    """
    return _random_graph(n_followers, seed, p, n_leaders, True)


def random_undirected(n_followers: int, seed: int, p: float = 0.3, n_leaders: int = 1) -> LeaderGraph:
    return _random_graph(n_followers, seed, p, n_leaders, False)


KINDS = {
    "directed_path": directed_path,
    "undirected_path": undirected_path,
    "directed_cycle_plus_leader": directed_cycle_plus_leader,
    "directed_random_tree": directed_random_tree,
    "balanced_cycle_family": balanced_cycle_family,
    "random_directed": random_directed,
    "random_undirected": random_undirected,
}


def generate(kind: str, *args, **params) -> LeaderGraph:
    try:
        fn = KINDS[kind]
    except KeyError:
        raise BadParamsError(f"unknown generator {kind!r}; choose from {sorted(KINDS)}") from None
    try:
        return fn(*args, **params)
    except TypeError as exc:
        raise BadParamsError(f"{kind}: {exc}") from None
