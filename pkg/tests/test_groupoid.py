import random

import pytest

from conftest import random_atom, random_bisection, random_clopen
from groupoidkit import oracle
from groupoidkit.boundary import ClopenSet, Path
from groupoidkit.errors import GroupoidkitError
from groupoidkit.graphs import builtin_graph
from groupoidkit.groupoid import (
    ArrowAtom,
    Bisection,
    GroupoidElement,
    IndexedBisection,
    bisection_from_text,
    compose,
    cross_with_R,
    indexed_compose,
    indexed_equal,
    indexed_inverse,
    indexed_range,
    indexed_source,
    inverse,
    range_of,
    restrict,
    source_of,
    verify_bisection,
)


def za(e2):
    return Path("v", ("a",))


def test_compose_examples(e2):
    a, b = Path("v", ("a",)), Path("v", ("b",))
    u = Bisection.atom(e2, a, b)
    v = Bisection.atom(e2, b, a)
    assert compose(u, v) == Bisection.atom(e2, a, a)
    assert compose(u, u).is_empty()
    uu = compose(u, inverse(u))
    assert uu == Bisection.identity(range_of(u))


def test_inverse_examples(e2):
    a, b = Path("v", ("a",)), Path("v", ("b",))
    u = Bisection.atom(e2, a, b)
    assert inverse(u) == Bisection.atom(e2, b, a)
    assert inverse(inverse(u)) == u
    iu = cross_with_R(u, {(1, 3)})
    assert indexed_inverse(iu) == cross_with_R(inverse(u), {(3, 1)})


def test_range_source_examples(e2):
    a, b = Path("v", ("a",)), Path("v", ("b",))
    u = Bisection.atom(e2, a, b)
    assert range_of(u) == ClopenSet.from_edge_word(e2, ["a"])
    assert source_of(u) == ClopenSet.from_edge_word(e2, ["b"])
    w = Bisection.atom(e2, Path("v"), a)
    assert range_of(w) == ClopenSet.everything(e2)
    assert range_of(inverse(u)) == source_of(u)


def test_restrict_examples(e2):
    a, b = Path("v", ("a",)), Path("v", ("b",))
    u = Bisection.atom(e2, a, b)
    assert restrict(u, range_of(u).union(source_of(u))) == u
    assert restrict(u, ClopenSet.empty(e2)).is_empty()
    # the range of Z(a,b) is Z(a), disjoint from Z(b): the corner is empty,
    # which is exactly what the arrow oracle reports
    k = ClopenSet.from_edge_word(e2, ["b"])
    sym = restrict(u, k)
    pts = oracle.clopen_points(k, 4)
    brute = oracle.arrows_restrict(oracle.bisection_arrows(u, 4), pts)
    assert oracle.bisection_arrows(sym, 4) == brute == set()


def test_cross_with_r_laws(e2):
    a, b = Path("v", ("a",)), Path("v", ("b",))
    u = Bisection.atom(e2, a, b)
    v = Bisection.atom(e2, b, a)
    left = indexed_compose(cross_with_R(u, {(1, 2)}), cross_with_R(v, {(2, 5)}))
    assert left == cross_with_R(compose(u, v), {(1, 5)})
    assert indexed_compose(
        cross_with_R(u, {(1, 2)}), cross_with_R(v, {(3, 5)})
    ).is_empty()
    ident = Bisection.identity(ClopenSet.everything(e2))
    ii = cross_with_R(ident, {(4, 4)})
    assert indexed_range(ii) == indexed_source(ii)
    with pytest.raises(GroupoidkitError):
        cross_with_R(ii, {(1, 1)})


def test_verify_bisection_examples(e2):
    a, b = Path("v", ("a",)), Path("v", ("b",))
    ok, _ = verify_bisection(e2, [ArrowAtom(a, a), ArrowAtom(b, b)])
    assert ok
    ok, witness = verify_bisection(e2, [ArrowAtom(a, a), ArrowAtom(a, b)])
    assert not ok and witness[0] == "range"
    ok, _ = verify_bisection(e2, [])
    assert ok


def test_oracle_equivalence_sampled(corpus_graph):
    rng = random.Random(101)
    for _ in range(60):
        u = random_bisection(rng, corpus_graph)
        v = random_bisection(rng, corpus_graph)
        depth = max(u.max_path_len(), v.max_path_len()) + 2
        au = oracle.bisection_arrows(u, depth)
        assert oracle.bisection_arrows(compose(u, v), depth) == oracle.brute_compose(
            u, v, depth
        )
        assert oracle.bisection_arrows(inverse(u), depth) == oracle.arrows_inverse(au)
        assert oracle.clopen_points(range_of(u), depth) == oracle.arrows_range(au)
        assert oracle.clopen_points(source_of(u), depth) == oracle.arrows_source(au)
        k = random_clopen(rng, corpus_graph)
        pts = oracle.clopen_points(k, depth)
        assert oracle.bisection_arrows(restrict(u, k), depth) == oracle.arrows_restrict(
            au, pts
        )


def test_associativity_sampled(corpus_graph):
    rng = random.Random(55)
    for _ in range(40):
        u = random_bisection(rng, corpus_graph, max_len=1)
        v = random_bisection(rng, corpus_graph, max_len=1)
        w = random_bisection(rng, corpus_graph, max_len=1)
        assert compose(compose(u, v), w) == compose(u, compose(v, w))


def test_inverse_semigroup_law(corpus_graph):
    rng = random.Random(77)
    for _ in range(40):
        u = random_bisection(rng, corpus_graph)
        assert compose(compose(u, inverse(u)), u) == u


def test_groupoid_element_atoms(e2):
    g = GroupoidElement(e2, Path("v", ("a", "a")), 1, Path("v", ("a",)))
    atom = g.to_atom()
    assert atom.degree == 1
    with pytest.raises(GroupoidkitError):
        GroupoidElement(e2, Path("v", ("a", "b")), 0, Path("v", ("b", "b")))
    indexed = GroupoidElement(e2, Path("v", ("a",)), 1, Path("v"), index=(0, 2))
    bis = indexed.to_bisection()
    assert isinstance(bis, IndexedBisection)


def test_bisection_text_syntax(e2):
    u = bisection_from_text(e2, "B{ (a | b) }")
    assert u == Bisection.atom(e2, Path("v", ("a",)), Path("v", ("b",)))
    iu = bisection_from_text(e2, "B{ (a | b) @ (1,2) }")
    assert iu == cross_with_R(u, {(1, 2)})
    w = bisection_from_text(e2, r"B{ (a.a | a \ {b}); (a.b | b) }")
    assert len(w.atoms) == 2


def test_indexed_equal_across_representations(e2):
    a, b = Path("v", ("a",)), Path("v", ("b",))
    u = cross_with_R(Bisection.atom(e2, a, b), {(0, 1), (2, 3)})
    v1 = cross_with_R(Bisection.atom(e2, a, b), {(0, 1)})
    v2 = cross_with_R(Bisection.atom(e2, a, b), {(2, 3)})
    assert indexed_equal(u, v1.union(v2, validate=False))
    assert not indexed_equal(u, v1)
