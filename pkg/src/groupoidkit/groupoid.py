"""Compact open bisections of the graph groupoid, and of its product with
the full equivalence relation on N.

An arrow atom ``Z(alpha, beta \\ F)`` denotes the arrows
``(alpha x, |alpha| - |beta|, beta x)`` over shared boundary tails ``x``
through ``r(alpha) = r(beta)`` avoiding ``F``.  A bisection is a finite
union of atoms whose ranges are pairwise disjoint and whose sources are
pairwise disjoint, so range and source restrict to bijections.

Canonical form mirrors the clopen-set normal form, degree class by degree
class: shared tails are expanded to a common length (absorbing ``\\ F``),
duplicates collapse, and full sibling families merge back into their parent.
Equality of arrow sets is then literal equality of atom tuples.

Indexed bisections live in the product with ``N x N``; their index parts are
either explicit finite pair sets or cylinder pair families
(:mod:`groupoidkit.indexsets`), so the infinite stabilization bisections
stay exactly representable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boundary import ClopenSet, CylinderAtom, IndexedClopenSet, Path, path_key, path_range
from .errors import GroupoidkitError, MixedGraphError
from .indexsets import (
    CylPairFamily,
    FinitePairs,
    IndexSet,
    family_compose,
    family_difference,
    family_intersection,
    family_restrict_range,
    family_restrict_source,
    pair_family,
)


@dataclass(frozen=True)
class ArrowAtom:
    """``Z(alpha, beta \\ F)`` with ``r(alpha) = r(beta)``."""

    alpha: Path
    beta: Path
    excluded: frozenset = frozenset()

    @property
    def degree(self):
        return len(self.alpha) - len(self.beta)

    def validate(self, graph):
        ra = path_range(graph, self.alpha)
        rb = path_range(graph, self.beta)
        if ra != rb:
            raise GroupoidkitError(
                f"arrow atom paths end at different vertices ({ra!r} vs {rb!r})"
            )
        allowed = set(graph.out_edges(ra))
        if not self.excluded <= allowed:
            raise GroupoidkitError("excluded edges do not start at the common range")
        if graph.is_sink(ra) and self.excluded:
            raise GroupoidkitError("an arrow atom at a sink admits no exclusions")
        return self

    def range_atom(self):
        return CylinderAtom(self.alpha, self.excluded)

    def source_atom(self):
        return CylinderAtom(self.beta, self.excluded)

    def swap(self):
        return ArrowAtom(self.beta, self.alpha, self.excluded)

    def __repr__(self):
        def word(p):
            return ".".join(map(str, p.edges)) if p.edges else str(p.start)

        excl = ""
        if self.excluded:
            excl = " \\ {%s}" % ",".join(sorted(map(str, self.excluded)))
        return f"Z({word(self.alpha)}, {word(self.beta)}{excl})"


def _expand_arrow(graph, alpha, beta, excluded, target, acc):
    r = path_range(graph, alpha)
    if graph.is_sink(r):
        acc.add((alpha, beta))
        return
    if len(alpha) >= target and not excluded:
        acc.add((alpha, beta))
        return
    for eid in graph.out_edges(r):
        if eid in excluded:
            continue
        _expand_arrow(graph, alpha.extend(eid), beta.extend(eid), frozenset(), target, acc)


def _merge_arrow_leaves(graph, leaves):
    leaves = set(leaves)
    if not leaves:
        return leaves
    max_len = max(len(a) for a, _ in leaves)
    for length in range(max_len, 0, -1):
        parents = {}
        for a, b in leaves:
            if len(a) == length and len(b) >= 1 and a.edges[-1] == b.edges[-1]:
                parents.setdefault((a.prefix(len(a) - 1), b.prefix(len(b) - 1)), []).append(
                    (a, b)
                )
        for (pa, pb), children in parents.items():
            family = graph.out_edges(path_range(graph, pa))
            if family and len(children) == len(family):
                present = {a.edges[-1] for a, _ in children}
                if present == set(family):
                    leaves.difference_update(children)
                    leaves.add((pa, pb))
    return leaves


class Bisection:
    """A compact open bisection of the graph groupoid, in canonical form."""

    __slots__ = ("graph", "atoms")

    def __init__(self, graph, atoms, validate=True):
        by_degree = {}
        for atom in atoms:
            if not isinstance(atom, ArrowAtom):
                atom = ArrowAtom(*atom)
            atom.validate(graph)
            by_degree.setdefault(atom.degree, []).append(atom)
        canon = []
        for degree in sorted(by_degree):
            group = by_degree[degree]
            target = max(len(a.alpha) + (1 if a.excluded else 0) for a in group)
            expanded = set()
            for a in group:
                _expand_arrow(graph, a.alpha, a.beta, a.excluded, target, expanded)
            merged = _merge_arrow_leaves(graph, expanded)
            canon.extend(ArrowAtom(a, b) for a, b in merged)
        canon.sort(
            key=lambda a: (a.degree, path_key(graph, a.alpha), path_key(graph, a.beta))
        )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "atoms", tuple(canon))
        if validate:
            witness = bisection_overlap(self)
            if witness is not None:
                raise GroupoidkitError(f"atoms do not form a bisection: {witness}")

    def __setattr__(self, *args):
        raise AttributeError("Bisection is immutable")

    @classmethod
    def empty(cls, graph):
        return cls(graph, [])

    @classmethod
    def identity(cls, clopen: ClopenSet):
        return cls(clopen.graph, [ArrowAtom(p, p) for p in clopen.leaves])

    @classmethod
    def atom(cls, graph, alpha: Path, beta: Path, excluded=()):
        return cls(graph, [ArrowAtom(alpha, beta, frozenset(excluded))])

    def is_empty(self):
        return not self.atoms

    def degrees(self):
        return sorted({a.degree for a in self.atoms})

    def max_path_len(self):
        return max((max(len(a.alpha), len(a.beta)) for a in self.atoms), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, Bisection)
            and self.graph == other.graph
            and self.atoms == other.atoms
        )

    def __hash__(self):
        return hash(self.atoms)

    def sort_key(self):
        return tuple(
            (a.degree, path_key(self.graph, a.alpha), path_key(self.graph, a.beta))
            for a in self.atoms
        )

    def __repr__(self):
        if not self.atoms:
            return "Bisection(empty)"
        return "Bisection{" + "; ".join(map(repr, self.atoms)) + "}"

    def _require_same_graph(self, other):
        if self.graph != other.graph:
            raise MixedGraphError("bisections over different graphs")

    def union(self, other):
        self._require_same_graph(other)
        return Bisection(self.graph, self.atoms + other.atoms)


def bisection_overlap(b: Bisection):
    """None when ranges and sources are pairwise disjoint, else a witness
    (side, atom_i, atom_j)."""
    atoms = b.atoms
    for i in range(len(atoms)):
        ri = ClopenSet(b.graph, [atoms[i].range_atom()])
        si = ClopenSet(b.graph, [atoms[i].source_atom()])
        for j in range(i + 1, len(atoms)):
            rj = ClopenSet(b.graph, [atoms[j].range_atom()])
            if not ri.is_disjoint(rj):
                return ("range", atoms[i], atoms[j])
            sj = ClopenSet(b.graph, [atoms[j].source_atom()])
            if not si.is_disjoint(sj):
                return ("source", atoms[i], atoms[j])
    return None


def verify_bisection(graph, atoms):
    """Check the bisection property of a raw atom list.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness names
    the overlapping side and the two atoms responsible.
    """
    try:
        candidate = Bisection(graph, atoms, validate=False)
    except GroupoidkitError as exc:
        return False, ("invalid-atom", str(exc))
    witness = bisection_overlap(candidate)
    return (witness is None), witness


def inverse(u: Bisection) -> Bisection:
    """Atom-wise swap of the two legs; an involution."""
    return Bisection(u.graph, [a.swap() for a in u.atoms], validate=False)


def range_of(u: Bisection) -> ClopenSet:
    return ClopenSet(u.graph, [a.range_atom() for a in u.atoms])


def source_of(u: Bisection) -> ClopenSet:
    return ClopenSet(u.graph, [a.source_atom() for a in u.atoms])


def _compose_atom_pair(graph, a1, a2):
    """Atoms of the product Z(a1) . Z(a2); at most one atom results."""
    b1, al2 = a1.beta, a2.alpha
    if al2.start != b1.start:
        return None
    if len(al2.edges) >= len(b1.edges):
        if al2.edges[: len(b1.edges)] != b1.edges:
            return None
        delta = al2.edges[len(b1.edges):]
        if delta:
            if delta[0] in a1.excluded:
                return None
            alpha = Path(a1.alpha.start, a1.alpha.edges + delta)
            return ArrowAtom(alpha, a2.beta, a2.excluded)
        return ArrowAtom(a1.alpha, a2.beta, a1.excluded | a2.excluded)
    if b1.edges[: len(al2.edges)] != al2.edges:
        return None
    delta = b1.edges[len(al2.edges):]
    if delta[0] in a2.excluded:
        return None
    beta = Path(a2.beta.start, a2.beta.edges + delta)
    return ArrowAtom(a1.alpha, beta, a1.excluded)


def compose(u: Bisection, v: Bisection) -> Bisection:
    """The set product {xy : x in u, y in v, s(x) = r(y)}.

    >>> from groupoidkit.graphs import builtin_graph
    >>> e2 = builtin_graph("E2")
    >>> za = Path("v", ("a",)); zb = Path("v", ("b",))
    >>> compose(Bisection.atom(e2, za, zb), Bisection.atom(e2, zb, za))
    Bisection{Z(a, a)}
    """
    u._require_same_graph(v)
    out = []
    for a1 in u.atoms:
        for a2 in v.atoms:
            atom = _compose_atom_pair(u.graph, a1, a2)
            if atom is not None:
                if atom.degree != a1.degree + a2.degree:
                    raise AssertionError("degree bookkeeping violated in composition")
                out.append(atom)
    return Bisection(u.graph, out, validate=False)


def restrict(u: Bisection, clopen: ClopenSet) -> Bisection:
    """The sub-bisection K.u.K: atoms refined so ranges and sources lie in K."""
    if u.graph != clopen.graph:
        raise MixedGraphError("restricting by a clopen set over a different graph")
    graph = u.graph
    kept = []

    def refine(alpha, beta, excluded):
        r_atom = ClopenSet(graph, [CylinderAtom(alpha, excluded)])
        s_atom = ClopenSet(graph, [CylinderAtom(beta, excluded)])
        if r_atom.is_empty():
            return
        if r_atom.is_subset(clopen) and s_atom.is_subset(clopen):
            kept.append(ArrowAtom(alpha, beta, excluded))
            return
        if r_atom.is_disjoint(clopen) or s_atom.is_disjoint(clopen):
            return
        r = path_range(graph, alpha)
        if graph.is_sink(r):
            return  # single arrow, one endpoint outside K
        for eid in graph.out_edges(r):
            if eid in excluded:
                continue
            refine(alpha.extend(eid), beta.extend(eid), frozenset())

    for atom in u.atoms:
        refine(atom.alpha, atom.beta, atom.excluded)
    return Bisection(graph, kept, validate=False)


def restrict_range_clopen(u: Bisection, clopen: ClopenSet) -> Bisection:
    """Atoms refined so ranges lie in K (sources unconstrained)."""
    graph = u.graph
    kept = []

    def refine(alpha, beta, excluded):
        r_atom = ClopenSet(graph, [CylinderAtom(alpha, excluded)])
        if r_atom.is_empty():
            return
        if r_atom.is_subset(clopen):
            kept.append(ArrowAtom(alpha, beta, excluded))
            return
        if r_atom.is_disjoint(clopen):
            return
        r = path_range(graph, alpha)
        if graph.is_sink(r):
            return
        for eid in graph.out_edges(r):
            if eid in excluded:
                continue
            refine(alpha.extend(eid), beta.extend(eid), frozenset())

    for atom in u.atoms:
        refine(atom.alpha, atom.beta, atom.excluded)
    return Bisection(graph, kept, validate=False)


# -- indexed bisections --------------------------------------------------------


class IndexedBisection:
    """A compact open bisection of (graph groupoid) x (N x N).

    Stored as components ``(atoms, family)``: the arrows of ``atoms`` crossed
    with every index pair of ``family``.  Canonical form groups cylinder
    families by their stripped words and decomposes overlapping rest spaces,
    so equality of arrow sets is equality of components.
    """

    __slots__ = ("graph", "components")

    def __init__(self, graph, components, validate=True):
        finite = {}  # pair -> list of atoms
        cyl = {}  # (wr, ws) -> list of (rest, bisection)
        for atoms, family in components:
            if isinstance(atoms, Bisection):
                if atoms.graph != graph:
                    raise MixedGraphError("component over a different graph")
                bis = atoms
            else:
                bis = Bisection(graph, atoms, validate=False)
            if bis.is_empty():
                continue
            parts = [family]
            if isinstance(family, CylPairFamily):
                parts = pair_family(family.wr, family.ws, family.rest)
            for part in parts:
                if part.is_empty():
                    continue
                if isinstance(part, FinitePairs):
                    for p in part.pairs:
                        finite.setdefault(p, []).append(bis)
                else:
                    cyl.setdefault((part.wr, part.ws), []).append((part.rest, bis))
        canon = []
        atom_groups = {}
        for p, pieces in finite.items():
            merged = pieces[0]
            for extra in pieces[1:]:
                merged = merged.union(extra)
            atom_groups.setdefault(merged.atoms, [merged, set()])[1].add(p)
        for atoms_key, (bis, pairs) in atom_groups.items():
            canon.append((bis, FinitePairs(frozenset(pairs))))
        for (wr, ws), pieces in cyl.items():
            regions = []  # disjoint (rest IndexSet, Bisection)
            for rest, bis in pieces:
                remaining = rest
                updated = []
                for rset, rbis in regions:
                    overlap = rset.intersection(remaining)
                    if overlap.is_empty():
                        updated.append((rset, rbis))
                        continue
                    leftover = rset.difference(remaining)
                    if not leftover.is_empty():
                        updated.append((leftover, rbis))
                    updated.append((overlap, rbis.union(bis)))
                    remaining = remaining.difference(overlap)
                regions = updated
                if not remaining.is_empty():
                    regions.append((remaining, bis))
            by_atoms = {}
            for rest, bis in regions:
                if bis.atoms in by_atoms:
                    prev_rest, _ = by_atoms[bis.atoms]
                    by_atoms[bis.atoms] = (prev_rest.union(rest), bis)
                else:
                    by_atoms[bis.atoms] = (rest, bis)
            for rest, bis in by_atoms.values():
                finite_rest = None if rest.tree is not False else rest.plus
                if finite_rest is not None:
                    # a finite cylinder family is really an explicit pair set
                    from .indexsets import encode

                    pairs = frozenset(
                        (encode(wr, t), encode(ws, t)) for t in finite_rest
                    )
                    canon.append((bis, FinitePairs(pairs)))
                else:
                    canon.append((bis, CylPairFamily(wr, ws, rest)))
        canon.sort(key=lambda comp: (comp[1].sort_key(), comp[0].sort_key()))
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "components", tuple(canon))
        if validate:
            witness = indexed_overlap(self)
            if witness is not None:
                raise GroupoidkitError(f"components do not form a bisection: {witness}")

    def __setattr__(self, *args):
        raise AttributeError("IndexedBisection is immutable")

    @classmethod
    def empty(cls, graph):
        return cls(graph, [])

    def is_empty(self):
        return not self.components

    def __eq__(self, other):
        return (
            isinstance(other, IndexedBisection)
            and self.graph == other.graph
            and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        if not self.components:
            return "IndexedBisection(empty)"
        bits = [f"{b!r} x {f!r}" for b, f in self.components]
        return "IndexedBisection[" + "; ".join(bits) + "]"

    def _require_same_graph(self, other):
        if self.graph != other.graph:
            raise MixedGraphError("indexed bisections over different graphs")

    def union(self, other, validate=True):
        self._require_same_graph(other)
        return IndexedBisection(
            self.graph, list(self.components) + list(other.components), validate=validate
        )

    def fiber_by_range_index(self, i: int):
        """The finitely many arrows of this bisection whose range index is i,
        as (Bisection, source_index) pairs."""
        out = []
        for bis, fam in self.components:
            if isinstance(fam, FinitePairs):
                for ri, j in fam.pairs:
                    if ri == i:
                        out.append((bis, j))
            else:
                j = fam.by_range(i)
                if j is not None:
                    out.append((bis, j))
        return out

    def fiber_by_source_index(self, j: int):
        out = []
        for bis, fam in self.components:
            if isinstance(fam, FinitePairs):
                for i, sj in fam.pairs:
                    if sj == j:
                        out.append((bis, i))
            else:
                i = fam.by_source(j)
                if i is not None:
                    out.append((bis, i))
        return out


def cross_with_R(u: Bisection, pairs) -> IndexedBisection:
    """Cross an unindexed bisection with a finite set of index pairs.

    >>> from groupoidkit.graphs import builtin_graph
    >>> e2 = builtin_graph("E2")
    >>> u = Bisection.atom(e2, Path("v", ("a",)), Path("v", ("b",)))
    >>> cross_with_R(u, {(1, 2)}).fiber_by_range_index(1)[0][1]
    2
    """
    if isinstance(u, IndexedBisection):
        raise GroupoidkitError("bisection already carries indices")
    pairs = frozenset(tuple(p) for p in pairs)
    return IndexedBisection(u.graph, [(u, FinitePairs(pairs))])


def indexed_overlap(b: IndexedBisection):
    comps = b.components
    for i in range(len(comps)):
        bi, fi = comps[i]
        win = bisection_overlap(bi)
        if win is not None:
            return win
        for j in range(i + 1, len(comps)):
            bj, fj = comps[j]
            if not fi.range_set().is_disjoint(fj.range_set()):
                if not range_of(bi).is_disjoint(range_of(bj)):
                    return ("range", comps[i], comps[j])
            if not fi.source_set().is_disjoint(fj.source_set()):
                if not source_of(bi).is_disjoint(source_of(bj)):
                    return ("source", comps[i], comps[j])
    return None


def indexed_inverse(u: IndexedBisection) -> IndexedBisection:
    return IndexedBisection(
        u.graph,
        [(inverse(b), f.transpose()) for b, f in u.components],
        validate=False,
    )


def indexed_range(u: IndexedBisection) -> IndexedClopenSet:
    return IndexedClopenSet(
        u.graph, [(range_of(b), f.range_set()) for b, f in u.components]
    )


def indexed_source(u: IndexedBisection) -> IndexedClopenSet:
    return IndexedClopenSet(
        u.graph, [(source_of(b), f.source_set()) for b, f in u.components]
    )


def indexed_compose(u: IndexedBisection, v: IndexedBisection) -> IndexedBisection:
    u._require_same_graph(v)
    out = []
    for bu, fu in u.components:
        for bv, fv in v.components:
            fams = family_compose(fu, fv)
            if not fams:
                continue
            product = compose(bu, bv)
            if product.is_empty():
                continue
            for fam in fams:
                out.append((product, fam))
    return IndexedBisection(u.graph, out, validate=False)


def indexed_restrict_range(u: IndexedBisection, k: IndexedClopenSet) -> IndexedBisection:
    """Arrows of u whose range lies in the indexed clopen set k."""
    if u.graph != k.graph:
        raise MixedGraphError("mixed-graph operands")
    out = []
    for bis, fam in u.components:
        for clopen, idx in k.components:
            for part in family_restrict_range(fam, idx):
                refined = restrict_range_clopen(bis, clopen)
                if not refined.is_empty():
                    out.append((refined, part))
    return IndexedBisection(u.graph, out, validate=False)


def indexed_difference(u: IndexedBisection, v: IndexedBisection) -> IndexedBisection:
    """Arrow-set difference; used for exact equality checking."""
    u._require_same_graph(v)
    pieces = list(u.components)
    for bv, fv in v.components:
        next_pieces = []
        for bu, fu in pieces:
            overlaps = family_intersection(fu, fv)
            if not overlaps:
                next_pieces.append((bu, fu))
                continue
            for part in family_difference(fu, fv):
                next_pieces.append((bu, part))
            diff_atoms = _bisection_difference(bu, bv)
            if not diff_atoms.is_empty():
                for part in overlaps:
                    next_pieces.append((diff_atoms, part))
        pieces = next_pieces
    return IndexedBisection(u.graph, pieces, validate=False)


def _bisection_difference(u: Bisection, v: Bisection) -> Bisection:
    """Arrows of u not in v, degree class by degree class."""
    by_degree_v = {}
    for a in v.atoms:
        by_degree_v.setdefault(a.degree, []).append(a)
    out = []
    for a in u.atoms:
        rivals = by_degree_v.get(a.degree)
        if not rivals:
            out.append(a)
            continue
        target = max(
            [len(a.alpha)] + [len(r.alpha) for r in rivals]
        )
        mine = set()
        _expand_arrow(u.graph, a.alpha, a.beta, a.excluded, target, mine)
        theirs = set()
        for r in rivals:
            _expand_arrow(u.graph, r.alpha, r.beta, r.excluded, target, theirs)
        out.extend(ArrowAtom(x, y) for x, y in mine - theirs)
    return Bisection(u.graph, out, validate=False)


def indexed_equal(u: IndexedBisection, v: IndexedBisection) -> bool:
    return indexed_difference(u, v).is_empty() and indexed_difference(v, u).is_empty()


# -- groupoid elements ---------------------------------------------------------


@dataclass(frozen=True)
class GroupoidElement:
    """An arrow of the (indexed) graph groupoid known to finite depth.

    ``x`` and ``y`` are boundary prefixes, ``degree = m - n`` for the minimal
    witnessing shifts, and the shifted tails must agree to available depth.
    """

    graph: object
    x: Path
    degree: int
    y: Path
    index: tuple = None

    def __post_init__(self):
        self.to_atom()  # validates

    def to_atom(self) -> ArrowAtom:
        """The arrow atom of all completions of this element."""
        m = max(self.degree, 0)
        n = max(-self.degree, 0)
        if m > len(self.x) or n > len(self.y):
            raise GroupoidkitError("prefixes too short for the claimed degree")
        tail_x = self.x.edges[m:]
        tail_y = self.y.edges[n:]
        short, long_ = sorted((tail_x, tail_y), key=len)
        if long_[: len(short)] != short:
            raise GroupoidkitError("shifted tails disagree")
        alpha = Path(self.x.start, self.x.edges[:m] + long_)
        beta = Path(self.y.start, self.y.edges[:n] + long_)
        return ArrowAtom(alpha, beta).validate(self.graph)

    def to_bisection(self):
        atom = self.to_atom()
        if self.index is None:
            return Bisection(self.graph, [atom])
        return cross_with_R(
            Bisection(self.graph, [atom]), {tuple(self.index)}
        )


# -- text syntax ---------------------------------------------------------------


def bisection_from_text(graph, text: str):
    """Parse ``B{ (alpha | beta \\ {F}) @ (i,j); ... }``.

    Paths are dot-separated edge words or vertex ids.  The ``@ (i,j)`` index
    is optional but must be used consistently across the atoms.
    """
    import re

    from .boundary import _parse_mu

    text = text.strip()
    m = re.fullmatch(r"B\{(.*)\}", text, re.DOTALL)
    if not m:
        raise GroupoidkitError("bisection syntax is B{ (alpha | beta) ; ... }")
    plain, indexed = [], []
    for chunk in m.group(1).split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        am = re.fullmatch(
            r"\(\s*(?P<alpha>[^|]+?)\s*\|\s*(?P<beta>[^\\)]+?)\s*"
            r"(?:\\\s*\{(?P<excl>[^}]*)\}\s*)?\)\s*"
            r"(?:@\s*\(\s*(?P<i>\d+)\s*,\s*(?P<j>\d+)\s*\))?",
            chunk,
        )
        if not am:
            raise GroupoidkitError(f"cannot parse bisection atom {chunk!r}")
        alpha = _parse_mu(graph, am.group("alpha"))
        beta = _parse_mu(graph, am.group("beta"))
        excl = frozenset(
            tok.strip() for tok in (am.group("excl") or "").split(",") if tok.strip()
        )
        atom = ArrowAtom(alpha, beta, excl).validate(graph)
        if am.group("i") is None:
            plain.append(atom)
        else:
            indexed.append((atom, (int(am.group("i")), int(am.group("j")))))
    if indexed and plain:
        raise GroupoidkitError("mix of indexed and unindexed atoms")
    if indexed:
        comps = [
            (Bisection(graph, [a], validate=False), FinitePairs(frozenset({p})))
            for a, p in indexed
        ]
        return IndexedBisection(graph, comps)
    return Bisection(graph, plain)
