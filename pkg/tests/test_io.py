import json

import pytest
from hypothesis import given, settings, strategies as st

from leaderhinf.errors import AntiParallelPairError, ParseError
from leaderhinf.generators import random_directed, random_undirected
from leaderhinf.io import format_text, from_dict, parse_text, read_graph, to_dict, write_graph

TEXT = """# three-cycle with one leader
mode directed
nodes 4
leaders 3   # the reference
edge 3 0
edge 0 1
edge 1 2
edge 2 0
"""


def test_parse_text():
    g = parse_text(TEXT)
    assert g.n == 4 and g.leaders == {3} and g.directed
    assert g.sorted_edges() == [(0, 1), (1, 2), (2, 0), (3, 0)]


@pytest.mark.parametrize("text, line", [
    ("nodes 3\n", 1),
    ("mode sideways\n", 1),
    ("mode directed\nnodes three\n", 2),
    ("mode directed\nnodes 3\nleaders\n", 3),
    ("mode directed\nnodes 3\nleaders 0\nedge 0\n", 4),
    ("mode directed\nnodes 3\nleaders 0\n\n# c\narc 0 1\n", 6),
    ("mode directed\nnodes 3\nleaders 0\nedge 0 x\n", 4),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_text(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_parse_missing_header():
    with pytest.raises(ParseError):
        parse_text("mode directed\nnodes 3\n")


def test_invalid_graph_propagates():
    with pytest.raises(AntiParallelPairError):
        parse_text("mode directed\nnodes 3\nleaders 2\nedge 0 1\nedge 1 0\n")


def test_from_dict_errors():
    with pytest.raises(ParseError):
        from_dict({"mode": "directed", "nodes": 2})
    with pytest.raises(ParseError):
        from_dict({"mode": "directed", "nodes": 2, "leaders": [0], "edges": [[0, 1, 2]]})
    with pytest.raises(ParseError):
        from_dict({"mode": "directed", "nodes": "2", "leaders": [0], "edges": []})


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(1, 15), directed=st.booleans())
def test_round_trip(seed, m, directed):
    gen = random_directed if directed else random_undirected
    g = gen(m, seed=seed, p=0.3, n_leaders=2)
    assert parse_text(format_text(g)) == g
    assert from_dict(json.loads(json.dumps(to_dict(g)))) == g


def test_file_round_trip(tmp_path):
    g = parse_text(TEXT)
    for name in ("g.graph", "g.json"):
        write_graph(g, tmp_path / name)
        assert read_graph(tmp_path / name) == g
    # JSON content is sniffed even without the suffix
    (tmp_path / "h.txt").write_text(json.dumps(to_dict(g)))
    assert read_graph(tmp_path / "h.txt") == g
    (tmp_path / "bad.json").write_text("{oops")
    with pytest.raises(ParseError):
        read_graph(tmp_path / "bad.json")
