"""Reading and writing leader graphs.

Text format::

    # comment
    mode directed
    nodes 4
    leaders 3
    edge 3 0
    edge 0 1

The ``mode``, ``nodes`` and ``leaders`` lines come first, in that order.
JSON files hold ``{"mode", "nodes", "leaders", "edges"}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import GraphError, ParseError
from .graph import MODES, LeaderGraph, build_graph


def _int(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line) from None


def parse_text(text: str) -> LeaderGraph:
    header: dict[str, object] = {}
    edges = []
    expected = ["mode", "nodes", "leaders"]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if expected:
            want = expected.pop(0)
            if key != want:
                raise ParseError(f"expected '{want}' line, got {key!r}", lineno)
            if key == "mode":
                if len(rest) != 1 or rest[0] not in MODES:
                    raise ParseError(f"mode must be one of {MODES}", lineno)
                header["mode"] = rest[0]
            elif key == "nodes":
                if len(rest) != 1:
                    raise ParseError("nodes takes exactly one value", lineno)
                header["nodes"] = _int(rest[0], "node count", lineno)
            else:
                if not rest:
                    raise ParseError("leaders line lists no leader", lineno)
                header["leaders"] = [_int(t, "leader id", lineno) for t in rest]
            continue
        if key != "edge":
            raise ParseError(f"unknown record {key!r}", lineno)
        if len(rest) != 2:
            raise ParseError("edge takes exactly two node ids", lineno)
        edges.append((_int(rest[0], "edge tail", lineno), _int(rest[1], "edge head", lineno)))
    if expected:
        raise ParseError(f"missing '{expected[0]}' line")
    try:
        return build_graph(header["nodes"], edges, header["leaders"], header["mode"])
    except GraphError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None


def format_text(g: LeaderGraph) -> str:
    lines = [f"mode {g.mode}", f"nodes {g.n}", "leaders " + " ".join(str(v) for v in sorted(g.leaders))]
    lines += [f"edge {i} {j}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def to_dict(g: LeaderGraph) -> dict:
    return {
        "mode": g.mode,
        "nodes": g.n,
        "leaders": sorted(g.leaders),
        "edges": [list(e) for e in g.sorted_edges()],
    }


def from_dict(data: dict) -> LeaderGraph:
    try:
        mode = data["mode"]
        n = data["nodes"]
        leaders = data["leaders"]
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field {exc}") from None
    if mode not in MODES:
        raise ParseError(f"mode must be one of {MODES}")
    if not isinstance(n, int) or not all(isinstance(v, int) for v in leaders):
        raise ParseError("nodes and leader ids must be integers")
    pairs = []
    for k, e in enumerate(edges):
        if not (isinstance(e, (list, tuple)) and len(e) == 2 and all(isinstance(v, int) for v in e)):
            raise ParseError(f"edges[{k}] must be a pair of integers")
        pairs.append(tuple(e))
    return build_graph(n, pairs, leaders, mode)


def read_graph(path) -> LeaderGraph:
    """Load a graph from the text format, or JSON when the file is ``.json``."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno) from None
        return from_dict(data)
    return parse_text(text)


def write_graph(g: LeaderGraph, path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(to_dict(g), indent=2) + "\n")
    else:
        path.write_text(format_text(g))
