"""A decidable algebra of subsets of N, built on the Cantor pairing tree.

The stabilization constructions partition N into infinitely many infinite
pieces and keep subdividing them, so finite sets plus "cofinite tails" are
not enough to verify the resulting identities exactly.  Instead we use the
refinement tree induced by the pairing bijection::

    pair(a, b) = (a + b)(a + b + 1) / 2 + b          (0-based Cantor)

Every q in N decodes uniquely as q = pair(b - 1, t) with *branch* b >= 1 and
*rest* t < q (except q = 0, whose chain is branch 1 forever).  The cylinder
C(w) for a finite branch word w is the set of q whose decode chain starts
with w; C(()) = N and C(w) splits into the disjoint infinite cylinders
C(w + (b,)) over all branches b.  The piece N_i of the standard partition is
just C((i,)).

An IndexSet is a finite-depth decision tree over this branching structure
plus finitely many added/removed points.  All Boolean operations, equality,
emptiness and membership are exact, and every nonempty tree set is infinite,
which makes the (tree, plus, minus) decomposition canonical.

PairFamily values represent subsets of N x N used as bisection index parts:
either an explicit finite set of pairs, or the graph of the canonical
bijection C(ws) -> C(wr) restricted to an IndexSet of rests.
"""

from __future__ import annotations

from dataclasses import dataclass


def pair(a: int, b: int) -> int:
    """0-based Cantor pairing; a bijection N x N -> N."""
    return (a + b) * (a + b + 1) // 2 + b


def unpair(q: int):
    w = int(((8 * q + 1) ** 0.5 - 1) / 2)
    while (w + 1) * (w + 2) // 2 <= q:
        w += 1
    while w * (w + 1) // 2 > q:
        w -= 1
    b = q - w * (w + 1) // 2
    return w - b, b


def decode_step(q: int):
    """q -> (branch >= 1, rest)."""
    a, b = unpair(q)
    return a + 1, b


def encode(word, t: int) -> int:
    """The element of C(word) with rest t."""
    for b in reversed(tuple(word)):
        t = pair(b - 1, t)
    return t


def rest_after(word, q: int):
    """Rest of q below the cylinder C(word), or None if q is outside it."""
    for b in word:
        br, q = decode_step(q)
        if br != b:
            return None
    return q


# A tree node is True, False, or ("split", default_bool, children) where
# children is a sorted tuple of (branch, node) with node != default.


def _mk_split(default, children):
    pruned = tuple(
        (b, node) for b, node in sorted(children) if node != default
    )
    if not pruned:
        return default
    return ("split", default, pruned)


def _node_member(node, q):
    while node is not True and node is not False:
        _, default, children = node
        b, q = decode_step(q)
        node = next((child for cb, child in children if cb == b), default)
    return node


def _node_neg(node):
    if node is True or node is False:
        return not node
    _, default, children = node
    return _mk_split(not default, [(b, _node_neg(c)) for b, c in children])


def _node_combine(n1, n2, op):
    if (n1 is True or n1 is False) and (n2 is True or n2 is False):
        return op(n1, n2)
    d1, c1 = (n1, ()) if n1 in (True, False) else (n1[1], n1[2])
    d2, c2 = (n2, ()) if n2 in (True, False) else (n2[1], n2[2])
    branches = sorted({b for b, _ in c1} | {b for b, _ in c2})
    get1 = dict(c1)
    get2 = dict(c2)
    children = [
        (b, _node_combine(get1.get(b, d1), get2.get(b, d2), op)) for b in branches
    ]
    return _mk_split(op(d1, d2), children)


def _node_graft(word, node):
    for b in reversed(tuple(word)):
        node = _mk_split(False, [(b, node)])
    return node


def _node_ungraft(word, node):
    for b in word:
        if node is True or node is False:
            return node
        _, default, children = node
        node = next((child for cb, child in children if cb == b), default)
    return node


class IndexSet:
    """An exactly-represented subset of N; see the module docstring."""

    __slots__ = ("tree", "plus", "minus")

    def __init__(self, tree, plus=frozenset(), minus=frozenset()):
        plus = frozenset(q for q in plus if not _node_member(tree, q))
        minus = frozenset(q for q in minus if _node_member(tree, q))
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    def __setattr__(self, *args):
        raise AttributeError("IndexSet is immutable")

    @classmethod
    def full(cls):
        return cls(True)

    @classmethod
    def empty(cls):
        return cls(False)

    @classmethod
    def from_points(cls, points):
        return cls(False, plus=frozenset(points))

    @classmethod
    def cylinder(cls, word):
        """C(word); ``cylinder(())`` is all of N, ``cylinder((i,))`` is the
        i-th piece of the standard partition."""
        return cls(_node_graft(word, True))

    def contains(self, q: int) -> bool:
        if q in self.plus:
            return True
        if q in self.minus:
            return False
        return _node_member(self.tree, q)

    def is_empty(self) -> bool:
        return self.tree is False and not self.plus

    def _binary(self, other, op):
        tree = _node_combine(self.tree, other.tree, op)
        plus, minus = set(), set()
        for q in self.plus | self.minus | other.plus | other.minus:
            want = op(self.contains(q), other.contains(q))
            have = _node_member(tree, q)
            if want and not have:
                plus.add(q)
            elif have and not want:
                minus.add(q)
        return IndexSet(tree, frozenset(plus), frozenset(minus))

    def union(self, other):
        return self._binary(other, lambda a, b: a or b)

    def intersection(self, other):
        return self._binary(other, lambda a, b: a and b)

    def difference(self, other):
        return self._binary(other, lambda a, b: a and not b)

    def complement(self):
        return IndexSet(_node_neg(self.tree), plus=self.minus, minus=self.plus)

    def is_subset(self, other) -> bool:
        return self.difference(other).is_empty()

    def is_disjoint(self, other) -> bool:
        return self.intersection(other).is_empty()

    def graft(self, word):
        """{encode(word, t) : t in self}."""
        word = tuple(word)
        return IndexSet(
            _node_graft(word, self.tree),
            plus=frozenset(encode(word, q) for q in self.plus),
            minus=frozenset(encode(word, q) for q in self.minus),
        )

    def ungraft(self, word):
        """{t : encode(word, t) in self}."""
        word = tuple(word)
        plus, minus = set(), set()
        for q in self.plus:
            t = rest_after(word, q)
            if t is not None:
                plus.add(t)
        for q in self.minus:
            t = rest_after(word, q)
            if t is not None:
                minus.add(t)
        return IndexSet(_node_ungraft(word, self.tree), frozenset(plus), frozenset(minus))

    def __eq__(self, other):
        return (
            isinstance(other, IndexSet)
            and self.tree == other.tree
            and self.plus == other.plus
            and self.minus == other.minus
        )

    def __hash__(self):
        return hash((self.tree, self.plus, self.minus))

    def sort_key(self):
        return (repr(self.tree), tuple(sorted(self.plus)), tuple(sorted(self.minus)))

    def sample(self, limit=8):
        """Some members, ascending; complete when the set is finite-ish."""
        candidates = set(self.plus)

        def walk(node, word):
            if node is False:
                return
            if node is True:
                for t in range(limit):
                    candidates.add(encode(word, t))
                return
            _, default, children = node
            for b, child in children:
                walk(child, word + (b,))
            if default is True:
                used = {b for b, _ in children}
                added, b = 0, 1
                while added < 3:
                    if b not in used:
                        candidates.add(encode(word + (b,), 0))
                        added += 1
                    b += 1

        walk(self.tree, ())
        return sorted(q for q in candidates if self.contains(q))[:limit]

    def __repr__(self):
        if self.is_empty():
            return "IndexSet(empty)"
        if self.tree is True and not self.plus and not self.minus:
            return "IndexSet(N)"
        return f"IndexSet(~{self.sample(5)})"


# -- pair families -------------------------------------------------------------


@dataclass(frozen=True)
class FinitePairs:
    """An explicit finite set of index pairs (range_index, source_index)."""

    pairs: frozenset

    def is_empty(self):
        return not self.pairs

    def range_set(self) -> IndexSet:
        return IndexSet.from_points(i for i, _ in self.pairs)

    def source_set(self) -> IndexSet:
        return IndexSet.from_points(j for _, j in self.pairs)

    def transpose(self):
        return FinitePairs(frozenset((j, i) for i, j in self.pairs))

    def contains_pair(self, i, j):
        return (i, j) in self.pairs

    def by_range(self, i):
        return next((j for ri, j in self.pairs if ri == i), None)

    def by_source(self, j):
        return next((i for i, sj in self.pairs if sj == j), None)

    def sort_key(self):
        return (0, tuple(sorted(self.pairs)))

    def __repr__(self):
        return f"FinitePairs({sorted(self.pairs)})"


@dataclass(frozen=True)
class CylPairFamily:
    """The partial bijection {(encode(wr, t), encode(ws, t)) : t in rest}.

    Canonical invariants, enforced by :func:`pair_family`:

    * ``wr`` and ``ws`` share no common last branch (else the family has an
      equivalent shallower form), and
    * ``0 not in rest`` (the rest-0 element lies on the all-ones spine of the
      pairing tree, where distinct words can encode the same number; keeping
      it out makes distinct canonical families disjoint).
    """

    wr: tuple
    ws: tuple
    rest: IndexSet

    def is_empty(self):
        return self.rest.is_empty()

    def range_set(self) -> IndexSet:
        return self.rest.graft(self.wr)

    def source_set(self) -> IndexSet:
        return self.rest.graft(self.ws)

    def transpose(self):
        return CylPairFamily(self.ws, self.wr, self.rest)

    def contains_pair(self, i, j):
        t = rest_after(self.wr, i)
        if t is None or not self.rest.contains(t):
            return False
        return encode(self.ws, t) == j

    def by_range(self, i):
        t = rest_after(self.wr, i)
        if t is not None and self.rest.contains(t):
            return encode(self.ws, t)
        return None

    def by_source(self, j):
        t = rest_after(self.ws, j)
        if t is not None and self.rest.contains(t):
            return encode(self.wr, t)
        return None

    def sort_key(self):
        return (1, self.wr, self.ws, self.rest.sort_key())

    def __repr__(self):
        return f"CylPairFamily(wr={self.wr}, ws={self.ws}, rest~{self.rest.sample(3)})"


def pair_family(wr, ws, rest: IndexSet):
    """Canonicalize a cylinder pair family into a list of family parts.

    Returns at most one CylPairFamily plus at most one FinitePairs holding
    the extracted spine pair.
    """
    wr, ws = tuple(wr), tuple(ws)
    while wr and ws and wr[-1] == ws[-1]:
        rest = rest.graft((wr[-1],))
        wr, ws = wr[:-1], ws[:-1]
    parts = []
    if rest.contains(0):
        parts.append(FinitePairs(frozenset({(encode(wr, 0), encode(ws, 0))})))
        rest = rest.difference(IndexSet.from_points([0]))
    if not rest.is_empty():
        parts.append(CylPairFamily(wr, ws, rest))
    return parts


def family_intersection(f1, f2):
    """Family parts for the set-intersection of two canonical families."""
    if isinstance(f1, FinitePairs) and isinstance(f2, FinitePairs):
        common = f1.pairs & f2.pairs
        return [FinitePairs(common)] if common else []
    if isinstance(f1, FinitePairs):
        hits = frozenset(p for p in f1.pairs if f2.contains_pair(*p))
        return [FinitePairs(hits)] if hits else []
    if isinstance(f2, FinitePairs):
        return family_intersection(f2, f1)
    if f1.wr == f2.wr and f1.ws == f2.ws:
        rest = f1.rest.intersection(f2.rest)
        return [] if rest.is_empty() else [CylPairFamily(f1.wr, f1.ws, rest)]
    return []  # distinct canonical cylinder families are disjoint


def family_difference(f1, f2):
    """Family parts for f1 minus f2 (both canonical)."""
    if isinstance(f1, FinitePairs):
        keep = frozenset(p for p in f1.pairs if not f2.contains_pair(*p))
        return [FinitePairs(keep)] if keep else []
    if isinstance(f2, FinitePairs):
        rest = f1.rest
        for i, j in f2.pairs:
            t = rest_after(f1.wr, i)
            if t is not None and encode(f1.ws, t) == j:
                rest = rest.difference(IndexSet.from_points([t]))
        return [] if rest.is_empty() else [CylPairFamily(f1.wr, f1.ws, rest)]
    if f1.wr == f2.wr and f1.ws == f2.ws:
        rest = f1.rest.difference(f2.rest)
        return [] if rest.is_empty() else [CylPairFamily(f1.wr, f1.ws, rest)]
    return [f1]


def family_compose(f1, f2):
    """Family parts for {(i, l) : (i, j) in f1 and (j, l) in f2}."""
    if isinstance(f1, FinitePairs):
        pairs = set()
        for i, j in f1.pairs:
            l = f2.by_range(j)
            if l is not None:
                pairs.add((i, l))
        return [FinitePairs(frozenset(pairs))] if pairs else []
    if isinstance(f2, FinitePairs):
        pairs = set()
        for j, l in f2.pairs:
            i = f1.by_source(j)
            if i is not None:
                pairs.add((i, l))
        return [FinitePairs(frozenset(pairs))] if pairs else []
    # cylinder against cylinder: sources of f1 meet ranges of f2 only if the
    # words are nested, in which case the deeper side fixes the rest space
    w1s, w2r = f1.ws, f2.wr
    if len(w2r) >= len(w1s):
        if w2r[: len(w1s)] != w1s:
            return []
        delta = w2r[len(w1s):]
        rest = f2.rest.intersection(f1.rest.ungraft(delta))
        return pair_family(f1.wr + delta, f2.ws, rest)
    if w1s[: len(w2r)] != w2r:
        return []
    delta = w1s[len(w2r):]
    rest = f1.rest.intersection(f2.rest.ungraft(delta))
    return pair_family(f1.wr, f2.ws + delta, rest)


def family_restrict_range(fam, idx: IndexSet):
    """Family parts with range indices restricted to ``idx``."""
    if isinstance(fam, FinitePairs):
        keep = frozenset((i, j) for i, j in fam.pairs if idx.contains(i))
        return [FinitePairs(keep)] if keep else []
    rest = fam.rest.intersection(idx.ungraft(fam.wr))
    return [] if rest.is_empty() else [CylPairFamily(fam.wr, fam.ws, rest)]


def family_restrict_source(fam, idx: IndexSet):
    if isinstance(fam, FinitePairs):
        keep = frozenset((i, j) for i, j in fam.pairs if idx.contains(j))
        return [FinitePairs(keep)] if keep else []
    rest = fam.rest.intersection(idx.ungraft(fam.ws))
    return [] if rest.is_empty() else [CylPairFamily(fam.wr, fam.ws, rest)]
