"""Finite directed multigraphs with named vertices and edges.

Parallel edges and loops are first class.  Vertex declaration order is
significant: it fixes the row/column order of the adjacency matrix and every
canonical sort in the toolkit.  Paths compose left to right, ``mu = e1 e2``
requires ``range(e1) == source(e2)``, and ``vE1`` means the edges *emitted*
by ``v``.

The text file format::

    graph <name>
    vertex <id>
    edge <id> <src> <dst>

with ``#`` comments.  A JSON object ``{"name": ..., "vertices": [...],
"edges": [{"id":..., "src":..., "dst":...}]}`` is accepted as well.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import GraphParseError
from .intmat import IntegerMatrix


class VertexClass(str, Enum):
    REGULAR = "regular"
    SINK = "sink"
    SOURCE = "source"
    ISOLATED = "isolated"


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


class DirectedGraph:
    """A finite directed multigraph.

    >>> g = parse_graph("graph t\\nvertex v\\nvertex w\\nedge e v w\\n")
    >>> g.out_edges("v")
    ('e',)
    >>> g.is_sink("w")
    True
    """

    __slots__ = ("name", "vertices", "edges", "_vindex", "_eindex", "_edge", "_out", "_in")

    def __init__(self, name, vertices, edges):
        vertices = tuple(vertices)
        norm_edges = []
        for e in edges:
            if isinstance(e, Edge):
                norm_edges.append(e)
            else:
                eid, src, dst = e
                norm_edges.append(Edge(eid, src, dst))
        edges = tuple(norm_edges)

        vindex = {}
        for v in vertices:
            if v in vindex:
                raise GraphParseError(f"duplicate vertex id {v!r}")
            vindex[v] = len(vindex)
        eindex = {}
        edge_map = {}
        out = {v: [] for v in vertices}
        incoming = {v: [] for v in vertices}
        for e in edges:
            if e.id in eindex or e.id in vindex:
                raise GraphParseError(f"duplicate identifier {e.id!r}")
            if e.src not in vindex:
                raise GraphParseError(f"edge {e.id!r} has undeclared source {e.src!r}")
            if e.dst not in vindex:
                raise GraphParseError(f"edge {e.id!r} has undeclared range {e.dst!r}")
            eindex[e.id] = len(eindex)
            edge_map[e.id] = e
            out[e.src].append(e.id)
            incoming[e.dst].append(e.id)

        object.__setattr__(self, "name", name)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_vindex", vindex)
        object.__setattr__(self, "_eindex", eindex)
        object.__setattr__(self, "_edge", edge_map)
        object.__setattr__(self, "_out", {v: tuple(es) for v, es in out.items()})
        object.__setattr__(self, "_in", {v: tuple(es) for v, es in incoming.items()})

    def __setattr__(self, *args):
        raise AttributeError("DirectedGraph is immutable")

    # -- structure queries ------------------------------------------------

    def has_vertex(self, v):
        return v in self._vindex

    def out_edges(self, v):
        return self._out[v]

    def in_edges(self, v):
        return self._in[v]

    def edge_src(self, eid):
        return self._edge[eid].src

    def edge_dst(self, eid):
        return self._edge[eid].dst

    def is_sink(self, v):
        return not self._out[v]

    def is_source(self, v):
        return not self._in[v]

    def vertex_sort_key(self, v):
        return self._vindex[v]

    def edge_sort_key(self, eid):
        return self._eindex[eid]

    def __eq__(self, other):
        return (
            isinstance(other, DirectedGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"<DirectedGraph {self.name!r}: {len(self.vertices)} vertices, {len(self.edges)} edges>"

    # -- derived data ------------------------------------------------------

    def adjacency_matrix(self) -> IntegerMatrix:
        """Entry (v, w) counts the edges from v to w, in vertex order."""
        n = len(self.vertices)
        data = [[0] * n for _ in range(n)]
        for e in self.edges:
            data[self._vindex[e.src]][self._vindex[e.dst]] += 1
        return IntegerMatrix(data)

    def classify_vertices(self):
        result = {}
        for v in self.vertices:
            emits = bool(self._out[v])
            receives = bool(self._in[v])
            if emits and receives:
                result[v] = VertexClass.REGULAR
            elif emits:
                result[v] = VertexClass.SOURCE
            elif receives:
                result[v] = VertexClass.SINK
            else:
                result[v] = VertexClass.ISOLATED
        return result

    def reachable_set(self, seeds):
        """All vertices reachable from ``seeds`` by directed paths, seeds included."""
        seeds = list(seeds)
        for v in seeds:
            if v not in self._vindex:
                raise KeyError(f"unknown vertex {v!r}")
        seen = set(seeds)
        stack = list(seeds)
        while stack:
            v = stack.pop()
            for eid in self._out[v]:
                w = self.edge_dst(eid)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    def strongly_connected(self):
        """True iff every vertex reaches every other vertex."""
        if not self.vertices:
            return True
        v0 = self.vertices[0]
        if len(self.reachable_set([v0])) != len(self.vertices):
            return False
        back = {v: set() for v in self.vertices}
        for e in self.edges:
            back[e.dst].add(e.src)
        seen = {v0}
        stack = [v0]
        while stack:
            v = stack.pop()
            for w in back[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def find_cycle_in(self, allowed):
        """A list of edge ids forming a directed cycle within ``allowed``
        vertices, or None."""
        allowed = set(allowed)
        color = {}
        parent_edge = {}

        def dfs(v):
            color[v] = 1
            for eid in self._out[v]:
                w = self.edge_dst(eid)
                if w not in allowed:
                    continue
                if color.get(w, 0) == 0:
                    parent_edge[w] = (v, eid)
                    found = dfs(w)
                    if found is not None:
                        return found
                elif color[w] == 1:
                    cycle = [eid]
                    cur = v
                    while cur != w:
                        prev, peid = parent_edge[cur]
                        cycle.append(peid)
                        cur = prev
                    cycle.reverse()
                    return cycle
            color[v] = 2
            return None

        for v in self.vertices:
            if v in allowed and color.get(v, 0) == 0:
                cycle = dfs(v)
                if cycle is not None:
                    return cycle
        return None

    # -- serialization -----------------------------------------------------

    def serialize(self) -> str:
        lines = [f"graph {self.name}"]
        lines.extend(f"vertex {v}" for v in self.vertices)
        lines.extend(f"edge {e.id} {e.src} {e.dst}" for e in self.edges)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "vertices": list(self.vertices),
                "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges],
            },
            indent=2,
        )


def parse_graph(text: str) -> DirectedGraph:
    """Parse the text or JSON graph format; see the module docstring.

    >>> parse_graph(builtin_graph("E2").serialize()) == builtin_graph("E2")
    True
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(text)
    name = None
    vertices = []
    edges = []
    seen_ids = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "graph":
            if len(parts) != 2:
                raise GraphParseError("expected 'graph <name>'", lineno)
            if name is not None:
                raise GraphParseError("duplicate graph header", lineno)
            name = parts[1]
        elif kind == "vertex":
            if len(parts) != 2:
                raise GraphParseError("expected 'vertex <id>'", lineno)
            if parts[1] in seen_ids:
                raise GraphParseError(f"duplicate identifier {parts[1]!r}", lineno)
            seen_ids.add(parts[1])
            vertices.append(parts[1])
        elif kind == "edge":
            if len(parts) != 4:
                raise GraphParseError("expected 'edge <id> <src> <dst>'", lineno)
            eid, src, dst = parts[1:]
            if eid in seen_ids:
                raise GraphParseError(f"duplicate identifier {eid!r}", lineno)
            if src not in vertices:
                raise GraphParseError(f"edge {eid!r}: undeclared source {src!r}", lineno)
            if dst not in vertices:
                raise GraphParseError(f"edge {eid!r}: undeclared range {dst!r}", lineno)
            seen_ids.add(eid)
            edges.append(Edge(eid, src, dst))
        else:
            raise GraphParseError(f"unknown directive {kind!r}", lineno)
    if name is None:
        raise GraphParseError("missing 'graph <name>' header")
    return DirectedGraph(name, vertices, edges)


def _parse_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(obj, dict):
        raise GraphParseError("top-level JSON value must be an object")
    vertices = obj.get("vertices")
    edges_raw = obj.get("edges")
    if not isinstance(vertices, list) or not isinstance(edges_raw, list):
        raise GraphParseError("JSON graph needs 'vertices' and 'edges' lists")
    edges = []
    for item in edges_raw:
        try:
            edges.append(Edge(item["id"], item["src"], item["dst"]))
        except (TypeError, KeyError) as exc:
            raise GraphParseError(f"malformed edge entry {item!r}") from exc
    return DirectedGraph(obj.get("name", "unnamed"), vertices, edges)


def serialize_graph(graph: DirectedGraph) -> str:
    return graph.serialize()


def adjacency_matrix(graph: DirectedGraph) -> IntegerMatrix:
    return graph.adjacency_matrix()


def classify_vertices(graph: DirectedGraph):
    return graph.classify_vertices()


def reachable_set(graph: DirectedGraph, seeds):
    return graph.reachable_set(seeds)


_BUILTIN_SPECS = {
    # one vertex, two loops
    "E2": (
        "E2",
        ["v"],
        [("a", "v", "v"), ("b", "v", "v")],
    ),
    # three vertices; two loops at w1, one each at w2 and w3; a zig-zag spine
    "E2minus": (
        "E2minus",
        ["w1", "w2", "w3"],
        [
            ("a1", "w1", "w1"),
            ("a2", "w1", "w1"),
            ("d", "w1", "w2"),
            ("b", "w2", "w2"),
            ("e", "w2", "w3"),
            ("g", "w2", "w1"),
            ("c", "w3", "w3"),
            ("f", "w3", "w2"),
        ],
    ),
}

_builtin_cache = {}


def builtin_graph(name: str) -> DirectedGraph:
    """Return one of the named builtin graphs (``E2``, ``E2minus``)."""
    if name not in _BUILTIN_SPECS:
        raise KeyError(f"no builtin graph named {name!r}")
    if name not in _builtin_cache:
        gname, vs, es = _BUILTIN_SPECS[name]
        _builtin_cache[name] = DirectedGraph(gname, vs, es)
    return _builtin_cache[name]


def builtin_names():
    return tuple(_BUILTIN_SPECS)
