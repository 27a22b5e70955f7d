"""Shared corpus and sampling helpers."""

import random

import pytest

from groupoidkit.boundary import Path, enumerate_boundary, path_range
from groupoidkit.graphs import DirectedGraph, builtin_graph
from groupoidkit.groupoid import ArrowAtom, Bisection


def sink_graph():
    # an infinite orbit plus a genuine finite boundary point
    return DirectedGraph("sinky", ["v", "w"], [("l", "v", "v"), ("e", "v", "w")])


def source_graph():
    return DirectedGraph("sourcey", ["u", "v"], [("s", "u", "v"), ("l", "v", "v")])


def random4_graph():
    # frozen draw from random.Random(20240809)
    return DirectedGraph(
        "random4",
        ["p", "q", "r", "s"],
        [
            ("k0", "p", "p"),
            ("k1", "r", "p"),
            ("k2", "s", "p"),
            ("k3", "s", "r"),
            ("k4", "s", "p"),
            ("k5", "r", "q"),
            ("k6", "r", "s"),
        ],
    )


def corpus():
    return [
        builtin_graph("E2"),
        builtin_graph("E2minus"),
        sink_graph(),
        source_graph(),
        random4_graph(),
    ]


@pytest.fixture
def e2():
    return builtin_graph("E2")


@pytest.fixture
def e2minus():
    return builtin_graph("E2minus")


@pytest.fixture(params=corpus(), ids=lambda g: g.name)
def corpus_graph(request):
    return request.param


def random_path(rng, graph, max_len):
    prefixes = enumerate_boundary(graph, rng.randint(0, max_len))
    return rng.choice(prefixes).path


def random_atom(rng, graph, max_len=2, allow_excluded=True):
    for _ in range(500):
        alpha = random_path(rng, graph, max_len)
        r = path_range(graph, alpha)
        betas = [
            p.path
            for p in enumerate_boundary(graph, rng.randint(0, max_len))
            if path_range(graph, p.path) == r
        ]
        if not betas:
            continue
        beta = rng.choice(betas)
        excluded = frozenset()
        out = graph.out_edges(r)
        if allow_excluded and out and not graph.is_sink(r) and rng.random() < 0.4:
            excluded = frozenset(
                e for e in out if rng.random() < 0.5
            )
            if len(excluded) == len(out):
                excluded = frozenset(list(excluded)[:-1])
        return ArrowAtom(alpha, beta, excluded)
    raise AssertionError("sampling failed")


def random_bisection(rng, graph, max_len=2, max_atoms=2):
    for _ in range(200):
        atoms = [random_atom(rng, graph, max_len) for _ in range(rng.randint(1, max_atoms))]
        try:
            return Bisection(graph, atoms)
        except Exception:
            continue
    return Bisection(graph, [random_atom(rng, graph, max_len)])


def random_clopen(rng, graph, max_len=2, max_atoms=3):
    from groupoidkit.boundary import ClopenSet, CylinderAtom

    atoms = []
    for _ in range(rng.randint(0, max_atoms)):
        mu = random_path(rng, graph, max_len)
        r = path_range(graph, mu)
        excluded = frozenset()
        out = graph.out_edges(r)
        if out and not graph.is_sink(r) and rng.random() < 0.3:
            excluded = frozenset(e for e in out if rng.random() < 0.4)
        atoms.append(CylinderAtom(mu, excluded))
    return ClopenSet(graph, atoms)
