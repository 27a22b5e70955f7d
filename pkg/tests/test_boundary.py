import random

import pytest

from conftest import corpus, random_clopen, sink_graph
from groupoidkit import oracle
from groupoidkit.boundary import (
    BoundaryPrefix,
    ClopenSet,
    CylinderAtom,
    IndexedClopenSet,
    Path,
    boundary_prefix,
    clopen_from_text,
    enumerate_boundary,
    fullness_obstruction,
    is_full,
    normalize,
    path_range,
    shift,
)
from groupoidkit.errors import GroupoidkitError, MixedGraphError
from groupoidkit.graphs import DirectedGraph, builtin_graph, parse_graph
from groupoidkit.indexsets import IndexSet


def test_enumerate_boundary_e2_depth2(e2):
    prefixes = enumerate_boundary(e2, 2)
    assert [p.path.edges for p in prefixes] == [
        ("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")
    ]
    assert all(not p.complete for p in prefixes)


def test_enumerate_boundary_sink_example():
    vw = parse_graph("graph t\nvertex v\nvertex w\nedge e v w\n")
    prefixes = enumerate_boundary(vw, 2)
    assert {(p.path.edges, p.complete) for p in prefixes} == {
        (("e",), True), ((), True)
    }


def test_enumerate_boundary_depth0(corpus_graph):
    for p in enumerate_boundary(corpus_graph, 0):
        assert len(p.path) == 0
        assert p.complete == corpus_graph.is_sink(p.path.start)
    starts = {p.path.start for p in enumerate_boundary(corpus_graph, 0)}
    assert starts == set(corpus_graph.vertices)


def test_normalize_absorbs_exclusions(e2):
    k = ClopenSet.atom(e2, Path("v"), excluded={"a"})
    assert k == ClopenSet.from_edge_word(e2, ["b"])


def test_normalize_merges_full_families(e2):
    za = ClopenSet.from_edge_word(e2, ["a"])
    zb = ClopenSet.from_edge_word(e2, ["b"])
    assert za.union(zb) == ClopenSet.at_vertex(e2, "v")
    assert normalize(za.union(zb)) == za.union(zb)


def test_empty_set(e2):
    assert ClopenSet.empty(e2).is_empty()
    assert ClopenSet(e2, []) == ClopenSet.empty(e2)


def test_splitting_invariant(corpus_graph):
    # Z(mu) equals the disjoint union of its children at a non-sink
    for bp in enumerate_boundary(corpus_graph, 1):
        mu = bp.path.prefix(0)
        r = path_range(corpus_graph, mu)
        if corpus_graph.is_sink(r):
            continue
        whole = ClopenSet.atom(corpus_graph, mu)
        children = ClopenSet(
            corpus_graph,
            [CylinderAtom(mu.extend(e)) for e in corpus_graph.out_edges(r)],
        )
        assert whole == children


def test_set_ops_examples(e2):
    za = ClopenSet.from_edge_word(e2, ["a"])
    zab = ClopenSet.from_edge_word(e2, ["a", "b"])
    zb = ClopenSet.from_edge_word(e2, ["b"])
    assert zab.intersection(zb).is_empty()
    assert za.difference(za).is_empty()
    assert za.union(zb) == ClopenSet.everything(e2)


def test_mixed_graph_operands_error(e2, e2minus):
    with pytest.raises(MixedGraphError):
        ClopenSet.everything(e2).union(ClopenSet.everything(e2minus))


def test_set_ops_against_point_oracle(corpus_graph):
    rng = random.Random(31)
    for _ in range(60):
        k = random_clopen(rng, corpus_graph)
        l = random_clopen(rng, corpus_graph)
        depth = max(k.depth(), l.depth()) + 1
        pk = oracle.clopen_points(k, depth)
        pl = oracle.clopen_points(l, depth)
        assert oracle.clopen_points(k.union(l), depth) == pk | pl
        assert oracle.clopen_points(k.intersection(l), depth) == pk & pl
        assert oracle.clopen_points(k.difference(l), depth) == pk - pl
        assert k.is_subset(l) == (pk <= pl)
        assert k.is_disjoint(l) == (not (pk & pl))


def test_normalize_is_denotation_preserving(corpus_graph):
    rng = random.Random(17)
    for _ in range(40):
        k = random_clopen(rng, corpus_graph)
        for extra in range(3):
            depth = k.depth() + extra
            again = normalize(k)
            assert again == k
            assert oracle.clopen_points(again, depth) == oracle.clopen_points(k, depth)


def test_shift_examples(e2):
    x = boundary_prefix(e2, Path("v", ("a", "b")))
    assert shift(x, 1).path.edges == ("b",)
    assert shift(x, 0) == x
    with pytest.raises(GroupoidkitError):
        shift(x, 3)
    vw = parse_graph("graph t\nvertex v\nvertex w\nedge e v w\n")
    y = boundary_prefix(vw, Path("v", ("e",)))
    assert shift(y, 1).path == Path("w")
    assert shift(y, 1).complete


def test_is_full_examples(e2):
    assert is_full(e2, ClopenSet.from_edge_word(e2, ["a"]))
    two = DirectedGraph("two", ["v", "w"], [("lv", "v", "v"), ("lw", "w", "w")])
    obs = fullness_obstruction(two, ClopenSet.at_vertex(two, "v"))
    assert obs is not None and obs[0] == "cycle"
    vw = parse_graph("graph t\nvertex v\nvertex w\nedge e v w\n")
    assert is_full(vw, ClopenSet.at_vertex(vw, "w"))


def test_is_full_against_orbit_oracle_depth6(corpus_graph):
    # all single cylinders of depth <= 2 with exclusions, plus pairwise unions
    atoms = []
    for bp in enumerate_boundary(corpus_graph, 2):
        for cut in range(len(bp.path) + 1):
            mu = bp.path.prefix(cut)
            r = path_range(corpus_graph, mu)
            out = corpus_graph.out_edges(r)
            excl_choices = [frozenset()]
            if out and not corpus_graph.is_sink(r):
                excl_choices += [frozenset({out[0]})]
                if len(out) > 1:
                    excl_choices += [frozenset(out[:2])]
            for excl in excl_choices:
                atoms.append(CylinderAtom(mu, excl))
    sets = {ClopenSet(corpus_graph, [a]) for a in atoms}
    sets.add(ClopenSet.empty(corpus_graph))
    plain = [ClopenSet(corpus_graph, [CylinderAtom(a.mu)]) for a in atoms[:12]]
    for i in range(len(plain)):
        for j in range(i + 1, len(plain)):
            sets.add(plain[i].union(plain[j]))
    for k in sets:
        assert is_full(corpus_graph, k) == oracle.is_full_oracle(corpus_graph, k, 6), k


def test_contains_prefix(e2):
    k = ClopenSet.from_edge_word(e2, ["a", "b"])
    assert k.contains_prefix(Path("v", ("a", "b", "a")))
    assert not k.contains_prefix(Path("v", ("b", "a", "a")))
    with pytest.raises(GroupoidkitError):
        k.contains_prefix(Path("v", ("a",)))


def test_clopen_text_syntax(e2, e2minus):
    assert clopen_from_text(e2, "Z(a)") == ClopenSet.from_edge_word(e2, ["a"])
    assert clopen_from_text(e2, r"Z(v \ {a})") == ClopenSet.from_edge_word(e2, ["b"])
    assert clopen_from_text(e2, "Z(a) + Z(b)") == ClopenSet.everything(e2)
    assert clopen_from_text(e2minus, "Z(d.b)") == ClopenSet.from_edge_word(
        e2minus, ["d", "b"]
    )
    assert clopen_from_text(e2, "full") == ClopenSet.everything(e2)
    indexed = clopen_from_text(e2, "Z(a) @ 2")
    assert isinstance(indexed, IndexedClopenSet)
    assert indexed.fiber(2) == ClopenSet.from_edge_word(e2, ["a"])
    assert indexed.fiber(0).is_empty()


def test_indexed_clopen_algebra(e2):
    za = ClopenSet.from_edge_word(e2, ["a"])
    zb = ClopenSet.from_edge_word(e2, ["b"])
    everything = ClopenSet.everything(e2)
    s = IndexedClopenSet(e2, [(za, IndexSet.cylinder((1,))), (zb, IndexSet.cylinder((1,)))])
    assert s == IndexedClopenSet.uniform(everything, IndexSet.cylinder((1,)))
    t = IndexedClopenSet.uniform(za, IndexSet.full())
    assert t.difference(s).fiber(0) == za
    piece1 = IndexSet.cylinder((1,))
    some = next(q for q in range(50) if piece1.contains(q))
    assert t.difference(s).fiber(some).is_empty()
    assert s.union(t).fiber(some) == everything
    # complement representation of an indexed source inside K x N
    comp = IndexedClopenSet.uniform(everything, IndexSet.full()).difference(s)
    assert comp.fiber(some) == everything.difference(za).difference(zb)
