"""The boundary-path space of a finite directed graph, symbolically.

A boundary point is an infinite path or a finite path ending at a sink.  We
never materialize infinite objects: a *prefix* of given depth stands for the
set of boundary points extending it, and a clopen subset is a finite union
of cylinders ``Z(mu \\ F)`` (points through ``mu`` avoiding the edges of
``F`` next).

Canonical normal form
---------------------
Every clopen set is stored as a prefix-free set of plain cylinders: atoms are
expanded to a common depth (absorbing ``\\ F`` refinements into explicit
sibling atoms, halting early at sinks), deduplicated, and then full sibling
families are merged back into their parent, shortest form winning.  Equality
of point sets is then literal equality of the stored leaves.

>>> from groupoidkit.graphs import builtin_graph
>>> e2 = builtin_graph("E2")
>>> ClopenSet.atom(e2, Path("v"), excluded={"a"}) == ClopenSet.from_edge_word(e2, ["b"])
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import GroupoidkitError, MixedGraphError
from .indexsets import IndexSet


@dataclass(frozen=True)
class Path:
    """A finite path: a start vertex and a composable edge sequence.

    The empty path at a vertex is ``Path(v)``.  Paths do not remember their
    graph; pass the graph to the helpers below.
    """

    start: object
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    def __len__(self):
        return len(self.edges)

    def extend(self, eid):
        return Path(self.start, self.edges + (eid,))

    def prefix(self, n):
        return Path(self.start, self.edges[:n])

    def is_prefix_of(self, other):
        return (
            self.start == other.start
            and len(self.edges) <= len(other.edges)
            and other.edges[: len(self.edges)] == self.edges
        )

    def __repr__(self):
        if not self.edges:
            return f"Path({self.start!r})"
        return f"Path({self.start!r}, {'.'.join(map(str, self.edges))})"


def path_range(graph, path: Path):
    v = path.start
    for eid in path.edges:
        if graph.edge_src(eid) != v:
            raise GroupoidkitError(f"non-composable path at edge {eid!r}")
        v = graph.edge_dst(eid)
    return v


def path_concat(graph, left: Path, right: Path) -> Path:
    if path_range(graph, left) != right.start:
        raise GroupoidkitError("paths do not compose")
    return Path(left.start, left.edges + right.edges)


def path_shift(graph, path: Path, n: int) -> Path:
    """Drop the first n edges (the shift map on prefixes)."""
    if n < 0 or n > len(path.edges):
        raise GroupoidkitError(f"cannot shift {len(path.edges)}-edge path by {n}")
    return Path(path_range(graph, path.prefix(n)), path.edges[n:])


def path_key(graph, path: Path):
    return (
        graph.vertex_sort_key(path.start),
        tuple(graph.edge_sort_key(e) for e in path.edges),
    )


def validate_path(graph, path: Path):
    path_range(graph, path)
    return path


@dataclass(frozen=True)
class BoundaryPrefix:
    """A boundary point known to finite depth.

    ``complete`` prefixes end at a sink and are full boundary points;
    truncated prefixes stand for every boundary point extending them.
    """

    graph: object = field(compare=False)
    path: Path
    complete: bool

    def __post_init__(self):
        r = path_range(self.graph, self.path)
        if self.complete != self.graph.is_sink(r):
            raise GroupoidkitError(
                "completeness flag disagrees with the range vertex "
                f"(range {r!r} sink={self.graph.is_sink(r)})"
            )

    def __len__(self):
        return len(self.path)


def boundary_prefix(graph, path: Path) -> BoundaryPrefix:
    """Wrap a path, deriving the completeness flag from its range vertex."""
    return BoundaryPrefix(graph, path, graph.is_sink(path_range(graph, path)))


def shift(x: BoundaryPrefix, n: int) -> BoundaryPrefix:
    return boundary_prefix(x.graph, path_shift(x.graph, x.path, n))


def enumerate_boundary(graph, depth: int):
    """The depth-n partition of the boundary space.

    Returns every complete prefix of length <= depth together with every
    truncated prefix of length exactly depth, in canonical order.

    >>> from groupoidkit.graphs import builtin_graph
    >>> [p.path.edges for p in enumerate_boundary(builtin_graph("E2"), 2)]
    [('a', 'a'), ('a', 'b'), ('b', 'a'), ('b', 'b')]
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    out = []
    for v in graph.vertices:
        stack = [Path(v)]
        while stack:
            p = stack.pop()
            r = path_range(graph, p)
            if graph.is_sink(r):
                out.append(BoundaryPrefix(graph, p, True))
            elif len(p) == depth:
                out.append(BoundaryPrefix(graph, p, False))
            else:
                for eid in reversed(graph.out_edges(r)):
                    stack.append(p.extend(eid))
    out.sort(key=lambda bp: path_key(graph, bp.path))
    return out


@dataclass(frozen=True)
class CylinderAtom:
    """Cylinder ``Z(mu \\ F)``: boundary points through ``mu`` whose next
    edge is not in ``F``."""

    mu: Path
    excluded: frozenset = frozenset()

    def validate(self, graph):
        r = path_range(graph, self.mu)
        allowed = set(graph.out_edges(r))
        if not self.excluded <= allowed:
            raise GroupoidkitError(
                f"excluded edges {set(self.excluded) - allowed!r} do not start at {r!r}"
            )
        if graph.is_sink(r) and self.excluded:
            raise GroupoidkitError("a cylinder at a sink admits no exclusions")
        return self


def _expand_atom(graph, mu, excluded, target, acc):
    # Leaves are plain cylinders: exactly `target` long, or ending at a sink.
    r = path_range(graph, mu)
    if graph.is_sink(r):
        acc.add(mu)
        return
    if len(mu) >= target and not excluded:
        acc.add(mu)
        return
    for eid in graph.out_edges(r):
        if eid in excluded:
            continue
        _expand_atom(graph, mu.extend(eid), frozenset(), target, acc)


def _merge_leaves(graph, leaves):
    leaves = set(leaves)
    if not leaves:
        return leaves
    max_len = max(len(p) for p in leaves)
    for length in range(max_len, 0, -1):
        parents = {}
        for p in leaves:
            if len(p) == length:
                parents.setdefault(p.prefix(length - 1), []).append(p)
        for parent, children in parents.items():
            family = graph.out_edges(path_range(graph, parent))
            if family and len(children) == len(family):
                present = {c.edges[-1] for c in children}
                if present == set(family):
                    leaves.difference_update(children)
                    leaves.add(parent)
    return leaves


class ClopenSet:
    """A compact open subset of the boundary space, in canonical form."""

    __slots__ = ("graph", "leaves")

    def __init__(self, graph, atoms):
        expanded = set()
        target = 0
        checked = []
        for atom in atoms:
            if isinstance(atom, Path):
                atom = CylinderAtom(atom)
            atom.validate(graph)
            validate_path(graph, atom.mu)
            checked.append(atom)
            target = max(target, len(atom.mu) + (1 if atom.excluded else 0))
        for atom in checked:
            _expand_atom(graph, atom.mu, atom.excluded, target, expanded)
        leaves = _merge_leaves(graph, expanded)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(
            self, "leaves", tuple(sorted(leaves, key=lambda p: path_key(graph, p)))
        )

    def __setattr__(self, *args):
        raise AttributeError("ClopenSet is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def atom(cls, graph, mu: Path, excluded=()):
        return cls(graph, [CylinderAtom(mu, frozenset(excluded))])

    @classmethod
    def from_edge_word(cls, graph, edge_ids, excluded=()):
        edge_ids = list(edge_ids)
        start = graph.edge_src(edge_ids[0])
        return cls.atom(graph, Path(start, tuple(edge_ids)), excluded)

    @classmethod
    def at_vertex(cls, graph, v):
        return cls.atom(graph, Path(v))

    @classmethod
    def everything(cls, graph):
        return cls(graph, [CylinderAtom(Path(v)) for v in graph.vertices])

    @classmethod
    def empty(cls, graph):
        return cls(graph, [])

    # -- basic structure -----------------------------------------------------

    def is_empty(self):
        return not self.leaves

    def depth(self):
        return max((len(p) for p in self.leaves), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, ClopenSet)
            and self.graph == other.graph
            and self.leaves == other.leaves
        )

    def __hash__(self):
        return hash((id(type(self)), self.leaves))

    def sort_key(self):
        return tuple(path_key(self.graph, p) for p in self.leaves)

    def __repr__(self):
        if not self.leaves:
            return "ClopenSet(empty)"
        parts = []
        for p in self.leaves:
            parts.append(".".join(map(str, p.edges)) if p.edges else str(p.start))
        return "ClopenSet{" + ", ".join("Z(%s)" % s for s in parts) + "}"

    def _require_same_graph(self, other):
        if self.graph != other.graph:
            raise MixedGraphError("clopen sets over different graphs")

    def _aligned_leaves(self, other):
        target = max(self.depth(), other.depth())
        mine, theirs = set(), set()
        for p in self.leaves:
            _expand_atom(self.graph, p, frozenset(), target, mine)
        for p in other.leaves:
            _expand_atom(self.graph, p, frozenset(), target, theirs)
        return mine, theirs

    # -- the Boolean algebra ---------------------------------------------------

    def union(self, other):
        self._require_same_graph(other)
        return ClopenSet(self.graph, list(self.leaves) + list(other.leaves))

    def intersection(self, other):
        self._require_same_graph(other)
        mine, theirs = self._aligned_leaves(other)
        return ClopenSet(self.graph, mine & theirs)

    def difference(self, other):
        self._require_same_graph(other)
        mine, theirs = self._aligned_leaves(other)
        return ClopenSet(self.graph, mine - theirs)

    def complement(self):
        return ClopenSet.everything(self.graph).difference(self)

    def is_subset(self, other):
        return self.difference(other).is_empty()

    def is_disjoint(self, other):
        return self.intersection(other).is_empty()

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersection(other)

    def __sub__(self, other):
        return self.difference(other)

    # -- membership ---------------------------------------------------------

    def contains_prefix(self, x) -> bool:
        """Whether every boundary point extending ``x`` lies in this set.

        ``x`` must be deep enough to decide (at least the set's depth, or
        complete); otherwise raises.
        """
        path = x.path if isinstance(x, BoundaryPrefix) else x
        complete = self.graph.is_sink(path_range(self.graph, path))
        for leaf in self.leaves:
            if leaf.is_prefix_of(path):
                return True
        if not complete and len(path) < self.depth():
            if any(path.is_prefix_of(leaf) and leaf != path for leaf in self.leaves):
                raise GroupoidkitError(
                    f"prefix of length {len(path)} cannot decide membership "
                    f"in a depth-{self.depth()} set"
                )
        return False


def normalize(clopen: ClopenSet) -> ClopenSet:
    """Canonical form (idempotent; the constructor already normalizes)."""
    return ClopenSet(clopen.graph, [CylinderAtom(p) for p in clopen.leaves])


def is_full(graph, clopen: ClopenSet) -> bool:
    """Whether the saturation of ``clopen`` is the whole boundary space."""
    return fullness_obstruction(graph, clopen) is None


def fullness_obstruction(graph, clopen: ClopenSet):
    """None when the set is full, else a witness orbit missing it.

    A boundary point is saturated by K iff it visits a vertex reachable from
    the range of a truncated K-cylinder, or it is a finite point whose sink
    also terminates a complete K-atom.  So the obstructions are exactly the
    cycles, and the uncovered sinks, of the subgraph induced on vertices not
    reachable from K's truncated entry vertices.
    """
    if clopen.graph != graph:
        raise MixedGraphError("clopen set belongs to a different graph")
    trunc_roots = set()
    covered_sinks = set()
    for leaf in clopen.leaves:
        r = path_range(graph, leaf)
        if graph.is_sink(r):
            covered_sinks.add(r)
        else:
            trunc_roots.add(r)
    good = graph.reachable_set(trunc_roots) if trunc_roots else frozenset()
    bad = [v for v in graph.vertices if v not in good]
    cycle = graph.find_cycle_in(bad)
    if cycle is not None:
        return ("cycle", Path(graph.edge_src(cycle[0]), tuple(cycle)))
    for v in bad:
        if graph.is_sink(v) and v not in covered_sinks:
            return ("sink-path", Path(v))
    return None


# -- indexed clopen sets (subsets of boundary x N) ---------------------------


class IndexedClopenSet:
    """A clopen subset of ``boundary x N``: finitely many clopen fibers, each
    over an exactly-represented set of indices.

    Canonical form: fibers are pairwise distinct nonempty clopen sets with
    pairwise disjoint index sets, sorted.
    """

    __slots__ = ("graph", "components")

    def __init__(self, graph, components):
        regions = []  # disjoint (IndexSet, ClopenSet) pairs, built incrementally
        for clopen, idx in components:
            if clopen.graph != graph:
                raise MixedGraphError("component over a different graph")
            if not isinstance(idx, IndexSet):
                idx = IndexSet.from_points(idx)
            if clopen.is_empty() or idx.is_empty():
                continue
            remaining = idx
            updated = []
            for rset, rclopen in regions:
                overlap = rset.intersection(remaining)
                if overlap.is_empty():
                    updated.append((rset, rclopen))
                    continue
                rest = rset.difference(remaining)
                if not rest.is_empty():
                    updated.append((rest, rclopen))
                updated.append((overlap, rclopen.union(clopen)))
                remaining = remaining.difference(overlap)
            if not remaining.is_empty():
                updated.append((remaining, clopen))
            regions = updated
        by_clopen = {}
        for idx, clopen in regions:
            key = clopen.leaves
            if key in by_clopen:
                prev_idx, _ = by_clopen[key]
                by_clopen[key] = (prev_idx.union(idx), clopen)
            else:
                by_clopen[key] = (idx, clopen)
        canon = sorted(
            ((cl, idx) for idx, cl in by_clopen.values()),
            key=lambda pair: (pair[0].sort_key(), pair[1].sort_key()),
        )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "components", tuple(canon))

    def __setattr__(self, *args):
        raise AttributeError("IndexedClopenSet is immutable")

    @classmethod
    def empty(cls, graph):
        return cls(graph, [])

    @classmethod
    def uniform(cls, clopen: ClopenSet, idx: IndexSet):
        return cls(clopen.graph, [(clopen, idx)])

    @classmethod
    def at_index(cls, clopen: ClopenSet, i: int):
        return cls(clopen.graph, [(clopen, IndexSet.from_points([i]))])

    def is_empty(self):
        return not self.components

    def fiber(self, i: int) -> ClopenSet:
        for clopen, idx in self.components:
            if idx.contains(i):
                return clopen
        return ClopenSet.empty(self.graph)

    def index_support(self) -> IndexSet:
        out = IndexSet.empty()
        for _, idx in self.components:
            out = out.union(idx)
        return out

    def _require_same_graph(self, other):
        if self.graph != other.graph:
            raise MixedGraphError("indexed clopen sets over different graphs")

    def union(self, other):
        self._require_same_graph(other)
        return IndexedClopenSet(self.graph, list(self.components) + list(other.components))

    def difference(self, other):
        self._require_same_graph(other)
        pieces = []
        for clopen, idx in self.components:
            shards = [(clopen, idx)]
            for oclopen, oidx in other.components:
                next_shards = []
                for c, s in shards:
                    hit = s.intersection(oidx)
                    if hit.is_empty():
                        next_shards.append((c, s))
                        continue
                    rest = s.difference(oidx)
                    if not rest.is_empty():
                        next_shards.append((c, rest))
                    cut = c.difference(oclopen)
                    if not cut.is_empty():
                        next_shards.append((cut, hit))
                shards = next_shards
            pieces.extend(shards)
        return IndexedClopenSet(self.graph, pieces)

    def intersection(self, other):
        self._require_same_graph(other)
        pieces = []
        for clopen, idx in self.components:
            for oclopen, oidx in other.components:
                hit = idx.intersection(oidx)
                if hit.is_empty():
                    continue
                common = clopen.intersection(oclopen)
                if not common.is_empty():
                    pieces.append((common, hit))
        return IndexedClopenSet(self.graph, pieces)

    def is_subset(self, other):
        return self.difference(other).is_empty()

    def __eq__(self, other):
        return (
            isinstance(other, IndexedClopenSet)
            and self.graph == other.graph
            and len(self.components) == len(other.components)
            and all(
                a[0] == b[0] and a[1] == b[1]
                for a, b in zip(self.components, other.components)
            )
        )

    def __hash__(self):
        return hash(tuple((c.leaves, i) for c, i in self.components))

    def __or__(self, other):
        return self.union(other)

    def __sub__(self, other):
        return self.difference(other)

    def __and__(self, other):
        return self.intersection(other)

    def __repr__(self):
        if not self.components:
            return "IndexedClopenSet(empty)"
        bits = [f"{c!r} x {i!r}" for c, i in self.components]
        return "IndexedClopenSet[" + "; ".join(bits) + "]"


# -- text syntax --------------------------------------------------------------

_ATOM_RE = re.compile(
    r"""Z\(\s*(?P<mu>[^\\)]*?)\s*(?:\\\s*\{(?P<excl>[^}]*)\}\s*)?\)\s*(?:@\s*(?P<idx>\d+))?""",
    re.VERBOSE,
)


def _parse_mu(graph, text):
    text = text.strip()
    if not text:
        raise GroupoidkitError("empty path in cylinder syntax")
    if graph.has_vertex(text):
        return Path(text)
    edge_ids = [tok.strip() for tok in text.split(".")]
    try:
        start = graph.edge_src(edge_ids[0])
    except KeyError:
        raise GroupoidkitError(f"unknown vertex or edge {edge_ids[0]!r}") from None
    return validate_path(graph, Path(start, tuple(edge_ids)))


def clopen_from_text(graph, text: str):
    """Parse ``Z(mu \\ {e1,e2}) @ i`` unions joined by ``+``.

    ``mu`` is a vertex id or a dot-separated edge word.  With any ``@ i``
    index present the result is an IndexedClopenSet; otherwise a ClopenSet.
    The words ``full`` and ``empty`` are also accepted.
    """
    text = text.strip()
    if text == "full":
        return ClopenSet.everything(graph)
    if text == "empty":
        return ClopenSet.empty(graph)
    plain, indexed = [], []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        m = _ATOM_RE.fullmatch(chunk)
        if not m:
            raise GroupoidkitError(f"cannot parse cylinder expression {chunk!r}")
        mu = _parse_mu(graph, m.group("mu"))
        excl = frozenset(
            tok.strip() for tok in (m.group("excl") or "").split(",") if tok.strip()
        )
        atom = CylinderAtom(mu, excl).validate(graph)
        if m.group("idx") is None:
            plain.append(atom)
        else:
            indexed.append((atom, int(m.group("idx"))))
    if indexed:
        comps = [(ClopenSet(graph, [a]), IndexSet.from_points([i])) for a, i in indexed]
        comps.extend((ClopenSet(graph, [a]), IndexSet.from_points([0])) for a in plain)
        return IndexedClopenSet(graph, comps)
    return ClopenSet(graph, plain)
