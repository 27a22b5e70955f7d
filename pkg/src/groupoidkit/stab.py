"""Graph stabilization, the explicit stabilized-groupoid isomorphism, and
the graph moves with a bounded move-equivalence search.

Stabilizing a graph appends an infinite head chain at every vertex; a
boundary point of the stabilized graph descends its head and then follows a
boundary point of the base graph, giving the index-splitting homeomorphism
and, on arrow atoms, the isomorphism between (base groupoid) x (N x N) and
the stabilized graph's groupoid: the index pair becomes the pair of head
lengths and the degree shifts by their difference.

Moves
-----
``S``  delete a source that emits at least one edge
``R``  collapse a loopless regular vertex (in/out edge pairs become edges)
``I``  in-split: partition the incoming edges, one vertex copy per class
``O``  out-split: partition the outgoing edges, one vertex copy per class
``C``  collapse a subgraph, accepted when it reduces to iterated ``R``

All moves preserve det(1 - A^t) and the cokernel of 1 - A^t; the test suite
checks that at every legal site.  ``find_move_sequence`` runs a bounded
bidirectional search over canonical forms and never reports a false
positive: every returned sequence is replayed and checked by canonical
labeling before being returned.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field, replace

from .boundary import Path, path_range
from .errors import GroupoidkitError, MoveError
from .graphs import DirectedGraph, Edge, VertexClass
from .groupoid import ArrowAtom, Bisection
from .indexsets import pair as cantor_pair
from .indexsets import unpair as cantor_unpair


class HeadedGraph:
    """A finite base graph with symbolic infinite appendages: head chains
    descending into chosen vertices and tail chains leaving chosen sinks.

    Head vertices are ("head", v, i) with i >= 1, emitting the single edge
    ("h", v, i) one step down (reaching v at i = 1).  Tail vertices mirror
    this outward from a sink.  The graph interface (out-edges, sinks, sort
    keys) is lazy, so the cylinder machinery works unchanged on it.
    """

    __slots__ = ("base", "heads", "tails")

    def __init__(self, base: DirectedGraph, heads=(), tails=()):
        heads = frozenset(heads)
        tails = frozenset(tails)
        for v in heads | tails:
            if not base.has_vertex(v):
                raise GroupoidkitError(f"appendage at unknown vertex {v!r}")
        for v in tails:
            if not base.is_sink(v):
                raise GroupoidkitError(f"tail at non-sink {v!r}")
        if heads & tails:
            raise GroupoidkitError("head and tail markers never share a vertex")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "tails", tails)

    def __setattr__(self, *args):
        raise AttributeError("HeadedGraph is immutable")

    # -- graph interface -----------------------------------------------------

    def _is_base_vertex(self, v):
        return isinstance(v, str)

    def out_edges(self, v):
        if self._is_base_vertex(v):
            out = self.base.out_edges(v)
            if v in self.tails:
                out = out + (("t", v, 1),)
            return out
        kind, base_v, i = v
        if kind == "head":
            return (("h", base_v, i),)
        return (("t", base_v, i + 1),)

    def edge_src(self, eid):
        if isinstance(eid, str):
            return self.base.edge_src(eid)
        kind, v, i = eid
        if kind == "h":
            return ("head", v, i)
        return v if i == 1 else ("tail", v, i - 1)

    def edge_dst(self, eid):
        if isinstance(eid, str):
            return self.base.edge_dst(eid)
        kind, v, i = eid
        if kind == "h":
            return v if i == 1 else ("head", v, i - 1)
        return ("tail", v, i)

    def is_sink(self, v):
        if self._is_base_vertex(v):
            return self.base.is_sink(v) and v not in self.tails
        return False

    def vertex_sort_key(self, v):
        if self._is_base_vertex(v):
            return (0, self.base.vertex_sort_key(v), 0)
        kind, base_v, i = v
        return (1 if kind == "head" else 2, self.base.vertex_sort_key(base_v), i)

    def edge_sort_key(self, eid):
        if isinstance(eid, str):
            return (0, self.base.edge_sort_key(eid), 0)
        kind, v, i = eid
        return (1 if kind == "h" else 2, self.base.vertex_sort_key(v), i)

    def has_vertex(self, v):
        return self._is_base_vertex(v) and self.base.has_vertex(v)

    def __eq__(self, other):
        return (
            isinstance(other, HeadedGraph)
            and self.base == other.base
            and self.heads == other.heads
            and self.tails == other.tails
        )

    def __hash__(self):
        return hash((self.base, self.heads, self.tails))

    def __repr__(self):
        return (
            f"<HeadedGraph over {self.base.name!r}: heads at {sorted(self.heads)},"
            f" tails at {sorted(self.tails)}>"
        )

    def head_path(self, v, i) -> Path:
        """The descent path from the i-th head vertex over v down to v."""
        if v not in self.heads:
            raise GroupoidkitError(f"no head at {v!r}")
        if i == 0:
            return Path(v)
        return Path(("head", v, i), tuple(("h", v, t) for t in range(i, 0, -1)))


def stabilize(graph: DirectedGraph) -> HeadedGraph:
    """The stabilized graph: a head chain appended at every vertex."""
    return HeadedGraph(graph, heads=graph.vertices)


def desingularize(graph: DirectedGraph) -> HeadedGraph:
    """Append an infinite tail at every sink, removing finite boundary
    points (finite graphs need nothing else)."""
    sinks = [v for v in graph.vertices if graph.is_sink(v)]
    return HeadedGraph(graph, tails=sinks)


def split_head(stabilized: HeadedGraph, path: Path):
    """Decompose a stabilized-graph path as (head descent, base path, i).

    Returns (base_path, i).  Raises when the path stops inside a head.
    """
    start = path.start
    if stabilized._is_base_vertex(start):
        for eid in path.edges:
            if not isinstance(eid, str):
                raise GroupoidkitError("base-anchored path wanders into an appendage")
        return path, 0
    kind, v, i = start
    if kind != "head":
        raise GroupoidkitError("path does not start on a head")
    expected = tuple(("h", v, t) for t in range(i, 0, -1))
    if path.edges[:i] != expected:
        raise GroupoidkitError("path is not of head-prefix form")
    rest = path.edges[i:]
    for eid in rest:
        if not isinstance(eid, str):
            raise GroupoidkitError("path re-enters an appendage")
    return Path(v, rest), i


def attach_head(stabilized: HeadedGraph, base_path: Path, i: int) -> Path:
    """Inverse of :func:`split_head`: prefix the i-step head descent."""
    mu = stabilized.head_path(base_path.start, i)
    return Path(mu.start, mu.edges + base_path.edges)


def to_stabilized_atom(stabilized: HeadedGraph, atom: ArrowAtom, index) -> ArrowAtom:
    """The stabilized-graph atom of (atom, (i, j)); degree becomes
    (|alpha| - |beta|) + i - j."""
    i, j = index
    alpha = attach_head(stabilized, atom.alpha, i)
    beta = attach_head(stabilized, atom.beta, j)
    return ArrowAtom(alpha, beta, atom.excluded)


def from_stabilized_atom(stabilized: HeadedGraph, atom: ArrowAtom):
    """Inverse of :func:`to_stabilized_atom`: returns (base atom, (i, j)).

    Atoms whose paths end inside a head are first pushed down to the base
    (the descent is forced, so the arrow set is unchanged).
    """
    alpha, beta, excluded = atom.alpha, atom.beta, atom.excluded
    while not stabilized._is_base_vertex(path_range(stabilized, alpha)):
        r = path_range(stabilized, alpha)
        eid = stabilized.out_edges(r)[0]
        if excluded:
            if eid in excluded:
                raise GroupoidkitError("atom is empty: forced descent excluded")
            excluded = frozenset()
        alpha = alpha.extend(eid)
        beta = beta.extend(stabilized.out_edges(path_range(stabilized, beta))[0])
    base_alpha, i = split_head(stabilized, alpha)
    base_beta, j = split_head(stabilized, beta)
    return ArrowAtom(base_alpha, base_beta, excluded), (i, j)


def to_stabilized_bisection(stabilized: HeadedGraph, indexed) -> Bisection:
    """Map an indexed bisection with finite pairs onto the stabilized graph."""
    from .indexsets import FinitePairs

    atoms = []
    for bis, fam in indexed.components:
        if not isinstance(fam, FinitePairs):
            raise GroupoidkitError("stabilization map needs finite index parts")
        for p in fam.pairs:
            for a in bis.atoms:
                atoms.append(to_stabilized_atom(stabilized, a, p))
    return Bisection(stabilized, atoms, validate=False)


def r_cross_r_pairing():
    """The fixed pairing bijection N x N -> N and its inverse."""
    return cantor_pair, cantor_unpair


def absorb_index_pair(stabilized: HeadedGraph, atom: ArrowAtom, index) -> ArrowAtom:
    """The self-stabilization isomorphism on atoms: absorb an extra index
    pair into the head lengths via the pairing bijection."""
    i, j = index
    base_atom, (p, q) = from_stabilized_atom(stabilized, atom)
    return to_stabilized_atom(
        stabilized, base_atom, (cantor_pair(p, i), cantor_pair(q, j))
    )


# -- moves ---------------------------------------------------------------------


@dataclass(frozen=True)
class MoveRecord:
    """One graph move: kind, site, optional edge partition, direction.

    ``data`` carries reconstruction payload for inverse replay; forward
    records built by hand never need it.
    """

    kind: str
    vertex: str
    partition: tuple = None  # tuple of frozensets of edge ids
    direction: str = "forward"
    data: dict = None

    def format_line(self):
        parts = ["MOVE", self.kind, self.vertex]
        if self.partition is not None:
            parts.append(
                "partition="
                + "|".join(",".join(sorted(block)) for block in self.partition)
            )
        if self.direction != "forward":
            parts.append("direction=" + self.direction)
        if self.data is not None:
            parts.append("data=" + json.dumps(self.data, sort_keys=True))
        return " ".join(parts)

    @classmethod
    def parse_line(cls, line):
        tokens = line.split(None, 3)
        if len(tokens) < 3 or tokens[0] != "MOVE":
            raise MoveError(f"malformed move line {line!r}")
        kind, vertex = tokens[1], tokens[2]
        partition = None
        direction = "forward"
        data = None
        rest = tokens[3] if len(tokens) > 3 else ""
        while rest:
            rest = rest.strip()
            if not rest:
                break
            key, _, tail = rest.partition("=")
            if key == "partition":
                value, _, rest = tail.partition(" ")
                partition = tuple(
                    frozenset(block.split(",")) for block in value.split("|")
                )
            elif key == "direction":
                value, _, rest = tail.partition(" ")
                direction = value
            elif key == "data":
                data = json.loads(tail)
                rest = ""
            else:
                raise MoveError(f"unknown move field {key!r}")
        return cls(kind, vertex, partition, direction, data)


@dataclass(frozen=True)
class MoveSequence:
    records: tuple

    def serialize(self):
        return "\n".join(r.format_line() for r in self.records) + ("\n" if self.records else "")

    @classmethod
    def parse(cls, text):
        records = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                records.append(MoveRecord.parse_line(line))
        return cls(tuple(records))

    def replay(self, graph: DirectedGraph) -> DirectedGraph:
        for record in self.records:
            graph = apply_move(graph, record)
        return graph

    def __len__(self):
        return len(self.records)


def _fresh(name, taken):
    while name in taken:
        name = name + "'"
    return name


def _edge_tuples(graph):
    return [(e.id, e.src, e.dst) for e in graph.edges]


def apply_move(graph: DirectedGraph, record: MoveRecord) -> DirectedGraph:
    """Apply one move (or its recorded inverse); pure and deterministic."""
    if record.direction == "inverse":
        return _apply_inverse(graph, record)
    kind = record.kind
    if kind == "S":
        return _move_delete_source(graph, record.vertex)
    if kind == "R":
        return _move_collapse(graph, record.vertex)
    if kind == "I":
        return _move_insplit(graph, record.vertex, record.partition)
    if kind == "O":
        return _move_outsplit(graph, record.vertex, record.partition)
    if kind == "C":
        out = graph
        for v in record.vertex.split(","):
            out = _move_collapse(out, v)
        return out
    raise MoveError(f"unknown move kind {record.kind!r}")


def _move_delete_source(graph, v):
    if not graph.has_vertex(v):
        raise MoveError(f"unknown vertex {v!r}")
    if graph.classify_vertices()[v] != VertexClass.SOURCE:
        raise MoveError(f"vertex {v!r} is not a regular source")
    vertices = [w for w in graph.vertices if w != v]
    edges = [(e.id, e.src, e.dst) for e in graph.edges if e.src != v]
    return DirectedGraph(graph.name, vertices, edges)


def _move_collapse(graph, v):
    if not graph.has_vertex(v):
        raise MoveError(f"unknown vertex {v!r}")
    if graph.classify_vertices()[v] != VertexClass.REGULAR:
        raise MoveError(f"vertex {v!r} is not regular")
    if any(graph.edge_dst(e) == v for e in graph.out_edges(v)):
        raise MoveError(f"vertex {v!r} supports a loop")
    taken = set(graph._vindex) | set(graph._eindex)
    composites = []
    for f in graph.in_edges(v):
        for e in graph.out_edges(v):
            cid = _fresh(f"{f}~{e}", taken)
            taken.add(cid)
            composites.append((cid, graph.edge_src(f), graph.edge_dst(e)))
    vertices = [w for w in graph.vertices if w != v]
    edges = [
        (e.id, e.src, e.dst)
        for e in graph.edges
        if e.src != v and e.dst != v
    ] + composites
    return DirectedGraph(graph.name, vertices, edges)


def _check_partition(blocks, universe, what):
    blocks = tuple(frozenset(b) for b in blocks)
    if not blocks or any(not b for b in blocks):
        raise MoveError(f"{what}: partition classes must be nonempty")
    seen = set()
    for b in blocks:
        if b & seen:
            raise MoveError(f"{what}: partition classes overlap")
        seen |= b
    if seen != set(universe):
        raise MoveError(f"{what}: partition must cover exactly the edge set")
    return blocks


def _split_names(graph, v, k):
    taken = set(graph._vindex) | set(graph._eindex)
    copies = []
    for t in range(1, k + 1):
        name = _fresh(f"{v}-{t}", taken)
        taken.add(name)
        copies.append(name)
    return copies, taken


def _move_insplit(graph, v, partition):
    if not graph.has_vertex(v):
        raise MoveError(f"unknown vertex {v!r}")
    if graph.classify_vertices()[v] != VertexClass.REGULAR:
        raise MoveError(f"in-split target {v!r} is not regular")
    blocks = _check_partition(partition, graph.in_edges(v), "in-split")
    k = len(blocks)
    copies, taken = _split_names(graph, v, k)
    block_of = {eid: t for t, block in enumerate(blocks) for eid in block}

    vertices = []
    for w in graph.vertices:
        vertices.extend(copies if w == v else [w])
    edges = []
    for e in graph.edges:
        if e.dst == v and e.src == v:
            # loop: incoming class fixes the target copy, source duplicates
            t = block_of[e.id]
            for s in range(k):
                name = e.id if s == 0 else _fresh(f"{e.id}-{s + 1}", taken)
                taken.add(name)
                edges.append((name, copies[s], copies[t]))
        elif e.dst == v:
            edges.append((e.id, e.src, copies[block_of[e.id]]))
        elif e.src == v:
            for s in range(k):
                name = e.id if s == 0 else _fresh(f"{e.id}-{s + 1}", taken)
                taken.add(name)
                edges.append((name, copies[s], e.dst))
        else:
            edges.append((e.id, e.src, e.dst))
    return DirectedGraph(graph.name, vertices, edges)


def _move_outsplit(graph, v, partition):
    if not graph.has_vertex(v):
        raise MoveError(f"unknown vertex {v!r}")
    if not graph.out_edges(v):
        raise MoveError(f"out-split target {v!r} emits no edges")
    blocks = _check_partition(partition, graph.out_edges(v), "out-split")
    k = len(blocks)
    copies, taken = _split_names(graph, v, k)
    block_of = {eid: t for t, block in enumerate(blocks) for eid in block}

    vertices = []
    for w in graph.vertices:
        vertices.extend(copies if w == v else [w])
    edges = []
    for e in graph.edges:
        if e.src == v and e.dst == v:
            t = block_of[e.id]
            for s in range(k):
                name = e.id if s == 0 else _fresh(f"{e.id}-{s + 1}", taken)
                taken.add(name)
                edges.append((name, copies[t], copies[s]))
        elif e.src == v:
            edges.append((e.id, copies[block_of[e.id]], e.dst))
        elif e.dst == v:
            for s in range(k):
                name = e.id if s == 0 else _fresh(f"{e.id}-{s + 1}", taken)
                taken.add(name)
                edges.append((name, e.src, copies[s]))
        else:
            edges.append((e.id, e.src, e.dst))
    return DirectedGraph(graph.name, vertices, edges)


def _apply_inverse(graph, record):
    data = record.data
    if data is None:
        raise MoveError("inverse replay needs reconstruction data")
    remove_vertices = set(data.get("remove_vertices", ()))
    vertices = [v for v in graph.vertices if v not in remove_vertices]
    vertices.extend(data.get("add_vertices", ()))
    remove_edges = set(data.get("remove_edges", ()))
    edges = [
        (e.id, e.src, e.dst)
        for e in graph.edges
        if e.id not in remove_edges and e.src not in remove_vertices
        and e.dst not in remove_vertices
    ]
    edges.extend(tuple(t) for t in data.get("add_edges", ()))
    return DirectedGraph(graph.name, vertices, edges)


# -- canonical labeling ----------------------------------------------------------


def canonical_form(graph: DirectedGraph):
    """A complete multigraph invariant: (key, vertex order realizing it).

    Colors are refined by iterated in/out multiplicity signatures, then a
    brute-force search over color-respecting orders minimizes the adjacency
    matrix.  Graphs here are tiny, so worst-case cost is acceptable.
    """
    verts = list(graph.vertices)
    n = len(verts)
    if n == 0:
        return (0, ()), ()
    adj = {(u, w): 0 for u in verts for w in verts}
    for e in graph.edges:
        adj[(e.src, e.dst)] += 1
    color = {v: 0 for v in verts}
    for _ in range(n):
        sig = {}
        for v in verts:
            outs = tuple(sorted((color[w], adj[(v, w)]) for w in verts if adj[(v, w)]))
            ins = tuple(sorted((color[u], adj[(u, v)]) for u in verts if adj[(u, v)]))
            sig[v] = (color[v], outs, ins)
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new_color = {v: ranks[sig[v]] for v in verts}
        if new_color == color:
            break
        color = new_color

    classes = {}
    for v in verts:
        classes.setdefault(color[v], []).append(v)
    ordered_classes = [classes[c] for c in sorted(classes)]

    best = [None, None]

    def search(order, remaining):
        if not remaining:
            key = tuple(adj[(u, w)] for u in order for w in order)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, tuple(order)
            return
        cls = remaining[0]
        for v in cls:
            rest = [w for w in cls if w != v]
            search(order + [v], ([rest] if rest else []) + remaining[1:])

    search([], ordered_classes)
    key = (n, best[0])
    return key, best[1]


def graphs_isomorphic(a: DirectedGraph, b: DirectedGraph) -> bool:
    return canonical_form(a)[0] == canonical_form(b)[0]


# -- move-equivalence search -----------------------------------------------------


def _set_partitions(items, max_blocks=None):
    items = list(items)
    if not items:
        return
    if max_blocks is None:
        max_blocks = len(items)

    def rec(rest, blocks):
        if not rest:
            yield [frozenset(b) for b in blocks]
            return
        x = rest[0]
        for i in range(len(blocks)):
            blocks[i].append(x)
            yield from rec(rest[1:], blocks)
            blocks[i].pop()
        if len(blocks) < max_blocks:
            blocks.append([x])
            yield from rec(rest[1:], blocks)
            blocks.pop()

    yield from rec(items, [])


def legal_moves(graph: DirectedGraph, max_split_edges=5, max_vertices=None):
    """All applicable forward move records, deterministically ordered."""
    out = []
    classes = graph.classify_vertices()
    for v in graph.vertices:
        if classes[v] == VertexClass.SOURCE:
            out.append(MoveRecord("S", v))
        if classes[v] == VertexClass.REGULAR and not any(
            graph.edge_dst(e) == v for e in graph.out_edges(v)
        ):
            out.append(MoveRecord("R", v))
    for v in graph.vertices:
        if max_vertices is not None and len(graph.vertices) + 1 > max_vertices:
            break
        if classes[v] == VertexClass.REGULAR and len(graph.in_edges(v)) <= max_split_edges:
            for blocks in _set_partitions(graph.in_edges(v)):
                if len(blocks) < 2:
                    continue
                if max_vertices is not None and len(graph.vertices) + len(blocks) - 1 > max_vertices:
                    continue
                ordered = tuple(sorted(blocks, key=lambda b: min(graph.edge_sort_key(e) for e in b)))
                out.append(MoveRecord("I", v, ordered))
        if graph.out_edges(v) and len(graph.out_edges(v)) <= max_split_edges:
            for blocks in _set_partitions(graph.out_edges(v)):
                if len(blocks) < 2:
                    continue
                if max_vertices is not None and len(graph.vertices) + len(blocks) - 1 > max_vertices:
                    continue
                ordered = tuple(sorted(blocks, key=lambda b: min(graph.edge_sort_key(e) for e in b)))
                out.append(MoveRecord("O", v, ordered))
    return out


def _vertex_iso(a: DirectedGraph, b: DirectedGraph):
    """A vertex bijection a -> b realizing canonical equality, plus an edge
    bijection matching parallel classes in declaration order."""
    key_a, order_a = canonical_form(a)
    key_b, order_b = canonical_form(b)
    if key_a != key_b:
        return None
    vmap = {va: vb for va, vb in zip(order_a, order_b)}
    emap = {}
    buckets = {}
    for e in b.edges:
        buckets.setdefault((e.src, e.dst), deque()).append(e.id)
    for e in a.edges:
        target = (vmap[e.src], vmap[e.dst])
        emap[e.id] = buckets[target].popleft()
    return vmap, emap


def _inverse_record(before: DirectedGraph, move: MoveRecord, after: DirectedGraph, rename):
    """A self-contained inverse record undoing ``move`` on a graph isomorphic
    to ``after`` via ``rename`` (after-ids -> current ids); returns the record
    and the rename map from ``before``-ids to the reconstructed graph's ids."""
    vmap, emap = rename
    taken = set(vmap.values()) | set(emap.values())
    new_vmap, new_emap = {}, {}

    def fresh_vertex(v):
        name = _fresh(v, taken)
        taken.add(name)
        new_vmap[v] = name
        return name

    def fresh_edge(e):
        name = _fresh(e, taken)
        taken.add(name)
        new_emap[e] = name
        return name

    # ids can be reused across a move with different endpoints (splits keep
    # the original id for the first copy), so diff structurally
    before_edges = {e.id: (e.src, e.dst) for e in before.edges}
    after_edges = {e.id: (e.src, e.dst) for e in after.edges}
    unchanged = {
        i
        for i in before_edges.keys() & after_edges.keys()
        if before_edges[i] == after_edges[i]
    }
    removed_vertices = [v for v in before.vertices if not after.has_vertex(v)]
    created_vertices = [v for v in after.vertices if not before.has_vertex(v)]
    removed_edges = [
        (e.id, e.src, e.dst) for e in before.edges if e.id not in unchanged
    ]
    created_edges = [e.id for e in after.edges if e.id not in unchanged]

    for v in removed_vertices:
        fresh_vertex(v)

    def map_vertex(v):
        if v in new_vmap:
            return new_vmap[v]
        return vmap[v]

    add_edges = []
    for eid, src, dst in removed_edges:
        add_edges.append((fresh_edge(eid), map_vertex(src), map_vertex(dst)))
    data = {
        "remove_vertices": [vmap[v] for v in created_vertices],
        "remove_edges": [emap[e] for e in created_edges],
        "add_vertices": [new_vmap[v] for v in removed_vertices],
        "add_edges": add_edges,
    }
    record = MoveRecord(move.kind, move.vertex, move.partition, "inverse", data)
    # ids genuinely shared between before and after keep their current names
    next_rename_v = {v: vmap[v] for v in before.vertices if after.has_vertex(v)}
    next_rename_v.update(new_vmap)
    next_rename_e = {e: emap[e] for e in unchanged}
    next_rename_e.update(new_emap)
    return record, (next_rename_v, next_rename_e)


def find_move_sequence(
    graph_e: DirectedGraph,
    graph_f: DirectedGraph,
    budget: int = 10_000,
    max_split_edges: int = 4,
    extra_vertices: int = 2,
):
    """Bounded bidirectional search for a move sequence from one graph to the
    other (up to isomorphism).  Returns a replay-verified MoveSequence, or
    None when the budget is exhausted (equivalence undecided, not refuted).
    """
    key_e, _ = canonical_form(graph_e)
    key_f, _ = canonical_form(graph_f)
    if key_e == key_f:
        return MoveSequence(())
    max_vertices = max(len(graph_e.vertices), len(graph_f.vertices)) + extra_vertices

    # each side: canonical key -> (graph, path of (record, graph_after))
    sides = [
        ({key_e: (graph_e, ())}, deque([key_e])),
        ({key_f: (graph_f, ())}, deque([key_f])),
    ]
    expansions = 0
    while expansions < budget and (sides[0][1] or sides[1][1]):
        side = 0 if len(sides[0][1]) <= len(sides[1][1]) and sides[0][1] else 1
        visited, queue = sides[side]
        if not queue:
            side = 1 - side
            visited, queue = sides[side]
        key = queue.popleft()
        current, path = visited[key]
        expansions += 1
        for record in legal_moves(current, max_split_edges, max_vertices):
            try:
                nxt = apply_move(current, record)
            except MoveError:
                continue
            nkey, _ = canonical_form(nxt)
            if nkey in visited:
                continue
            npath = path + ((record, nxt),)
            visited[nkey] = (nxt, npath)
            other_visited = sides[1 - side][0]
            if nkey in other_visited:
                if side == 0:
                    fwd_graph, fwd_path = nxt, npath
                    bwd_graph, bwd_path = other_visited[nkey]
                else:
                    fwd_graph, fwd_path = other_visited[nkey]
                    bwd_graph, bwd_path = nxt, npath
                seq = _stitch(graph_e, fwd_path, fwd_graph, bwd_graph, bwd_path, graph_f)
                if seq is not None:
                    return seq
            queue.append(nkey)
    return None


def _stitch(graph_e, fwd_path, meet_a, meet_b, bwd_path, graph_f):
    rename = _vertex_iso(meet_b, meet_a)
    if rename is None:
        return None
    records = [r for r, _ in fwd_path]
    prev_graphs = [graph_f] + [g for _, g in bwd_path[:-1]]
    current_rename = rename
    for (move, after), before in zip(reversed(bwd_path), reversed(prev_graphs)):
        record, current_rename = _inverse_record(before, move, after, current_rename)
        records.append(record)
    seq = MoveSequence(tuple(records))
    try:
        end = seq.replay(graph_e)
    except MoveError:
        return None
    if not graphs_isomorphic(end, graph_f):
        return None
    return seq
