import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidkit.errors import GraphParseError
from groupoidkit.graphs import (
    DirectedGraph,
    VertexClass,
    builtin_graph,
    classify_vertices,
    parse_graph,
    reachable_set,
)


def test_builtin_e2_shape():
    g = builtin_graph("E2")
    assert g.vertices == ("v",)
    assert [e.id for e in g.edges] == ["a", "b"]
    assert g.adjacency_matrix().to_lists() == [[2]]


def test_builtin_e2minus_adjacency():
    g = builtin_graph("E2minus")
    assert g.adjacency_matrix().to_lists() == [[2, 1, 0], [1, 1, 1], [0, 1, 1]]


def test_parse_text_roundtrip():
    g = builtin_graph("E2minus")
    assert parse_graph(g.serialize()) == g
    assert parse_graph(g.to_json()) == g


def test_parse_comments_and_isolated_vertex():
    g = parse_graph("graph t\n# nothing to see\nvertex only\n")
    assert g.vertices == ("only",)
    assert g.classify_vertices()["only"] == VertexClass.ISOLATED
    assert g.adjacency_matrix().to_lists() == [[0]]


@pytest.mark.parametrize(
    "text,fragment,line",
    [
        ("graph t\nvertex v\nvertex v\n", "duplicate", 3),
        ("graph t\nvertex v\nedge e v w\n", "undeclared", 3),
        ("graph t\nvertex v\nedge e v\n", "expected", 3),
        ("vertex v\n", "missing", None),
        ("graph t\nvertex v\nedge v v v\n", "duplicate", 3),
    ],
)
def test_parse_errors_carry_line(text, fragment, line):
    with pytest.raises(GraphParseError) as err:
        parse_graph(text)
    assert fragment in str(err.value)
    assert err.value.line == line


def test_classify_vertices():
    g = parse_graph("graph t\nvertex v\nvertex w\nedge e v w\n")
    assert classify_vertices(g) == {"v": VertexClass.SOURCE, "w": VertexClass.SINK}
    e2 = builtin_graph("E2")
    assert classify_vertices(e2) == {"v": VertexClass.REGULAR}


def _bfs_reachable(graph, seeds):
    # independent oracle: plain breadth-first search over edge tuples
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for e in graph.edges:
            if e.src in seen and e.dst not in seen:
                nxt.append(e.dst)
                seen.add(e.dst)
        frontier = nxt
    return frozenset(seen)


def test_reachable_examples():
    g = builtin_graph("E2minus")
    assert reachable_set(g, ["w1"]) == _bfs_reachable(g, ["w1"]) == frozenset({"w1", "w2", "w3"})
    vw = parse_graph("graph t\nvertex v\nvertex w\nedge e v w\n")
    assert reachable_set(vw, ["w"]) == frozenset({"w"})
    assert reachable_set(vw, ["v", "w"]) == frozenset({"v", "w"})


graphs_strategy = st.builds(
    lambda n, pairs: DirectedGraph(
        "h",
        [f"v{i}" for i in range(n)],
        [(f"e{k}", f"v{a % n}", f"v{b % n}") for k, (a, b) in enumerate(pairs)],
    ),
    st.integers(min_value=1, max_value=4),
    st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=8),
)


@given(graphs_strategy)
@settings(max_examples=60, deadline=None)
def test_serialize_parse_identity(g):
    assert parse_graph(g.serialize()) == g


@given(graphs_strategy, st.sets(st.integers(0, 3)))
@settings(max_examples=60, deadline=None)
def test_reachable_monotone_idempotent(g, seed_idx):
    seeds = [f"v{i}" for i in seed_idx if i < len(g.vertices)]
    reach = g.reachable_set(seeds)
    assert g.reachable_set(reach) == reach
    bigger = set(seeds) | {g.vertices[0]}
    assert reach <= g.reachable_set(bigger)
    assert reach == _bfs_reachable(g, seeds)


@given(graphs_strategy)
@settings(max_examples=60, deadline=None)
def test_adjacency_entries_sum_to_edge_count(g):
    m = g.adjacency_matrix()
    assert m.entry_sum() == len(g.edges)
    assert all(x >= 0 for row in m.to_lists() for x in row)
