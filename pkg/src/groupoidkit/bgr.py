"""Stabilization constructions: bisection covers of a full clopen set, the
isometry-like bisection W, the staged unitary Y, and corner conjugation.

Given a full clopen K in the boundary space, a finite list of compact open
bisections with sources in K and ranges partitioning the whole space always
exists (the space is compact).  Crossing with index pairs produces first a
bisection W with range (everything) x {1}, then, stage by stage, a bisection
Y of (groupoid) x (N x N) with range (everything) x N and source K x N.
Conjugation by Y realizes the isomorphism onto the corner over K, times N x N.

The index partition is N = C((1,)) + C((2,)) + ... in the pairing-tree
algebra of :mod:`groupoidkit.indexsets`; the reindexing bijections used by
the odd stages subdivide the piece C((l,)) into the sub-cylinders C((l, i)),
one per cover element, which is what keeps every stage equation exactly
checkable.

Stage invariants, for every n up to the stage count (writing U(j) for the
union over the first j stages):

* range U(2n-1) equals (everything) x (C(1) + ... + C(n)),
* range U(2n) is contained in (everything) x (C(1) + ... + C(n+1)),
* source U(2n-1) is contained in K x (C(1) + ... + C(n)),
* source U(2n) equals K x (C(1) + ... + C(n)),
* all stage ranges are pairwise disjoint, and likewise all sources.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boundary import (
    ClopenSet,
    IndexedClopenSet,
    Path,
    fullness_obstruction,
    path_key,
    path_range,
)
from .errors import GroupoidkitError, MixedGraphError, NotFullError, StageBudgetError
from .groupoid import (
    Bisection,
    GroupoidElement,
    IndexedBisection,
    compose,
    cross_with_R,
    indexed_compose,
    indexed_inverse,
    indexed_range,
    indexed_restrict_range,
    indexed_source,
    inverse,
    range_of,
    source_of,
)
from .indexsets import (
    CylPairFamily,
    IndexSet,
    decode_step,
    encode,
    pair,
    pair_family,
    rest_after,
    unpair,
)


def _shortest_witness_paths(graph, roots):
    """For every vertex reachable from ``roots``: the shortest path from a
    root, ties broken lexicographically, as a dict vertex -> (root, path)."""
    best = {}
    frontier = []
    for root in sorted(roots, key=graph.vertex_sort_key):
        if root not in best:
            best[root] = (root, Path(root))
            frontier.append(root)
    while frontier:
        new_frontier = []
        candidates = {}
        for v in frontier:
            root, p = best[v]
            for eid in graph.out_edges(v):
                w = graph.edge_dst(eid)
                if w in best:
                    continue
                cand = (root, p.extend(eid))
                key = (path_key(graph, cand[1]), graph.vertex_sort_key(cand[0]))
                if w not in candidates or key < candidates[w][0]:
                    candidates[w] = (key, cand)
        for w, (_, cand) in candidates.items():
            best[w] = cand
            new_frontier.append(w)
        frontier = new_frontier
    return best


def bisection_cover(graph, clopen: ClopenSet):
    """Finitely many bisections with sources in the (full) clopen set and
    ranges partitioning the boundary space.

    Each returned bisection covers one cell: for a vertex already saturated,
    the cell Z(v) is carried by the lexicographically least shortest path
    into it from a cylinder of the set; points that wander outside are
    chased until they either enter saturated territory or end at a covered
    sink.  Raises :class:`NotFullError` with a witness orbit otherwise.
    """
    obstruction = fullness_obstruction(graph, clopen)
    if obstruction is not None:
        raise NotFullError(f"clopen set is not full ({obstruction[0]})", obstruction)
    trunc_leaves = []
    complete_by_sink = {}
    for leaf in clopen.leaves:
        r = path_range(graph, leaf)
        if graph.is_sink(r):
            complete_by_sink.setdefault(r, leaf)
        else:
            trunc_leaves.append((leaf, r))
    witness = _shortest_witness_paths(graph, [r for _, r in trunc_leaves])
    into = {}  # good vertex -> path from inside K ending there
    for leaf, r in sorted(trunc_leaves, key=lambda lr: path_key(graph, lr[0])):
        for v, (root, p) in witness.items():
            if root == r and v not in into:
                into[v] = Path(leaf.start, leaf.edges + p.edges)
    good = set(into)

    cells = []  # (range path, source path) with equal range vertices
    for v in graph.vertices:
        if v in good:
            cells.append((Path(v), into[v]))
            continue

        def chase(p):
            r = path_range(graph, p)
            if r in good:
                cells.append((p, into[r]))
                return
            if graph.is_sink(r):
                cells.append((p, complete_by_sink[r]))
                return
            for eid in graph.out_edges(r):
                chase(p.extend(eid))

        chase(Path(v))
    cells.sort(key=lambda ab: path_key(graph, ab[0]))
    return [Bisection.atom(graph, alpha, beta) for alpha, beta in cells]


def isometry_bisection(graph, clopen: ClopenSet) -> IndexedBisection:
    """The bisection W with range (everything) x {1} and clopen source inside
    K x N: the cover elements tagged (1, i)."""
    cover = bisection_cover(graph, clopen)
    comps = [(v, None) for v in cover]
    return IndexedBisection(
        graph,
        [
            (v, _finite_pairs({(1, i)}))
            for i, v in enumerate(cover, start=1)
        ],
    )


def _finite_pairs(pairs):
    from .indexsets import FinitePairs

    return FinitePairs(frozenset(pairs))


def piece(i: int) -> IndexSet:
    """The i-th piece (i >= 1) of the standard partition of N."""
    return IndexSet.cylinder((i,))


def pieces_up_to(n: int) -> IndexSet:
    out = IndexSet.empty()
    for i in range(1, n + 1):
        out = out.union(piece(i))
    return out


class StagedUnitary:
    """The staged bisection Y with range (everything) x N, source K x N.

    Stages are built on demand and earlier stages never change, so the
    stream is monotone: the first 2n stages of a deeper evaluation coincide
    with a shallower one.
    """

    def __init__(self, graph, clopen: ClopenSet):
        if clopen.graph != graph:
            raise MixedGraphError("clopen set over a different graph")
        self.graph = graph
        self.clopen = clopen
        self.cover = bisection_cover(graph, clopen)
        self.stages = []  # stages[j - 1] is the j-th stage bisection

    # -- construction ------------------------------------------------------

    def extend_to(self, n: int):
        """Ensure 2n stages exist; returns self."""
        while len(self.stages) < 2 * n:
            self._add_stage()
        return self

    def _add_stage(self):
        j = len(self.stages) + 1
        l = (j + 1) // 2
        graph = self.graph
        if j % 2 == 1:
            reindexed = []
            for i, v in enumerate(self.cover, start=1):
                for part in pair_family((l,), (l, i), IndexSet.full()):
                    reindexed.append((v, part))
            w_prime = IndexedBisection(graph, reindexed, validate=False)
            prev_range = (
                indexed_range(self.stages[j - 2])
                if j >= 2
                else IndexedClopenSet.empty(graph)
            )
            target = IndexedClopenSet.uniform(
                ClopenSet.everything(graph), piece(l)
            ).difference(prev_range)
            stage = indexed_restrict_range(w_prime, target)
        else:
            leftover = IndexedClopenSet.uniform(self.clopen, piece(l)).difference(
                indexed_source(self.stages[j - 2])
            )
            comps = []
            for cl, idx in leftover.components:
                rest = idx.ungraft((l,))
                for part in pair_family((l + 1,), (l,), rest):
                    comps.append((Bisection.identity(cl), part))
            stage = IndexedBisection(graph, comps, validate=False)
        self.stages.append(stage)

    # -- the construction ingredients, as computable maps --------------------

    def phi(self, l: int, q: int) -> int:
        """The stage-2l transport bijection C(l) -> C(l+1)."""
        t = rest_after((l,), q)
        if t is None:
            raise ValueError(f"index {q} lies outside piece {l}")
        return encode((l + 1,), t)

    def theta(self, l: int, p: int, s: int) -> int:
        """A bijection C(l) x N -> C(l) compatible with the stage-(2l-1)
        reindexing: theta(p, k*m + (i-1)) lands in the sub-cylinder C(l, i)
        when p has rest k."""
        m = len(self.cover)
        k = rest_after((l,), p)
        if k is None:
            raise ValueError(f"index {p} lies outside piece {l}")
        k2, i0 = divmod(s, m)
        if k2 == k:
            return encode((l, i0 + 1), k)
        sigma = k2 if k2 < k else k2 - 1
        d = i0 + m * pair(k, sigma)
        a, b = unpair(d)
        return encode((l,), pair(m + a, b))

    # -- verification --------------------------------------------------------

    def range_union(self, count: int) -> IndexedClopenSet:
        out = IndexedClopenSet.empty(self.graph)
        for stage in self.stages[:count]:
            out = out.union(indexed_range(stage))
        return out

    def source_union(self, count: int) -> IndexedClopenSet:
        out = IndexedClopenSet.empty(self.graph)
        for stage in self.stages[:count]:
            out = out.union(indexed_source(stage))
        return out

    def stage_checks(self, n: int):
        """The four stage identities plus pairwise disjointness, evaluated
        exactly; returns a list of (name, passed, detail)."""
        self.extend_to(n)
        graph = self.graph
        everything = ClopenSet.everything(graph)
        checks = []
        for level in range(1, n + 1):
            lhs = self.range_union(2 * level - 1)
            rhs = IndexedClopenSet.uniform(everything, pieces_up_to(level))
            checks.append(
                (f"range-union({2 * level - 1}) == all x pieces(1..{level})", lhs == rhs, None)
            )
            lhs = self.range_union(2 * level)
            rhs = IndexedClopenSet.uniform(everything, pieces_up_to(level + 1))
            checks.append(
                (
                    f"range-union({2 * level}) within all x pieces(1..{level + 1})",
                    lhs.is_subset(rhs),
                    None,
                )
            )
            lhs = self.source_union(2 * level - 1)
            rhs = IndexedClopenSet.uniform(self.clopen, pieces_up_to(level))
            checks.append(
                (
                    f"source-union({2 * level - 1}) within K x pieces(1..{level})",
                    lhs.is_subset(rhs),
                    None,
                )
            )
            lhs = self.source_union(2 * level)
            checks.append(
                (f"source-union({2 * level}) == K x pieces(1..{level})", lhs == rhs, None)
            )
        ranges = [indexed_range(s) for s in self.stages[: 2 * n]]
        sources = [indexed_source(s) for s in self.stages[: 2 * n]]
        disjoint = True
        detail = None
        for i in range(len(ranges)):
            for j in range(i + 1, len(ranges)):
                if not ranges[i].intersection(ranges[j]).is_empty():
                    disjoint, detail = False, f"ranges of stages {i + 1},{j + 1}"
                if not sources[i].intersection(sources[j]).is_empty():
                    disjoint, detail = False, f"sources of stages {i + 1},{j + 1}"
        checks.append(("stage ranges and sources pairwise disjoint", disjoint, detail))
        return checks

    # -- conjugation ----------------------------------------------------------

    def stages_needed_for_index(self, q: int) -> int:
        branch, _ = decode_step(q)
        return 2 * branch - 1

    def fiber_at_range_index(self, q: int, max_stages=None) -> IndexedBisection:
        """The arrows of Y whose range index is q, as a finite bisection.

        Grows stages on demand; raises :class:`StageBudgetError` when the
        budget does not cover the needed piece.
        """
        needed = self.stages_needed_for_index(q)
        if max_stages is not None and needed > max_stages:
            raise StageBudgetError(
                f"index {q} needs {needed} stages, budget is {max_stages}"
            )
        while len(self.stages) < needed:
            self._add_stage()
        comps = []
        for stage in self.stages:
            for bis, j in stage.fiber_by_range_index(q):
                comps.append((bis, _finite_pairs({(q, j)})))
        fiber = IndexedBisection(self.graph, comps, validate=False)
        total = indexed_range(fiber)
        expected = IndexedClopenSet.at_index(ClopenSet.everything(self.graph), q)
        if total != expected:
            raise AssertionError(f"range fiber at index {q} is not total")
        return fiber

    def fiber_at_source_index(self, q: int, max_stages=None) -> IndexedBisection:
        needed = 2 * decode_step(q)[0]
        if max_stages is not None and needed > max_stages:
            raise StageBudgetError(
                f"index {q} needs {needed} stages, budget is {max_stages}"
            )
        while len(self.stages) < needed:
            self._add_stage()
        comps = []
        for stage in self.stages:
            for bis, i in stage.fiber_by_source_index(q):
                comps.append((bis, _finite_pairs({(i, q)})))
        return IndexedBisection(self.graph, comps, validate=False)


def unitary_stages(graph, clopen: ClopenSet, n: int) -> StagedUnitary:
    """Build (at least) 2n stages of the staged unitary for (graph, clopen)."""
    if n < 1:
        raise ValueError("stage count must be at least 1")
    return StagedUnitary(graph, clopen).extend_to(n)


def _element_indices(u: IndexedBisection):
    from .indexsets import FinitePairs

    rng, src = set(), set()
    for _, fam in u.components:
        if not isinstance(fam, FinitePairs):
            raise GroupoidkitError("conjugation needs finite index parts")
        for i, j in fam.pairs:
            rng.add(i)
            src.add(j)
    return rng, src


class CornerIsomorphism:
    """Conjugation by the staged unitary: the isomorphism between the
    stabilized groupoid and the stabilized corner over K."""

    def __init__(self, unitary: StagedUnitary, max_stages=None):
        self.unitary = unitary
        self.max_stages = max_stages

    def _as_indexed(self, g):
        if isinstance(g, GroupoidElement):
            if g.index is None:
                raise GroupoidkitError("conjugation needs an indexed element")
            return g.to_bisection()
        if isinstance(g, IndexedBisection):
            return g
        raise GroupoidkitError(f"cannot conjugate {type(g).__name__}")

    def forward(self, g) -> IndexedBisection:
        """Y^{-1} g Y, an arrow set of the corner groupoid times N x N."""
        gb = self._as_indexed(g)
        rng, src = _element_indices(gb)
        left = IndexedBisection.empty(self.unitary.graph)
        for i in sorted(rng):
            left = left.union(
                self.unitary.fiber_at_range_index(i, self.max_stages), validate=False
            )
        right = IndexedBisection.empty(self.unitary.graph)
        for j in sorted(src):
            right = right.union(
                self.unitary.fiber_at_range_index(j, self.max_stages), validate=False
            )
        return indexed_compose(indexed_compose(indexed_inverse(left), gb), right)

    def backward(self, h) -> IndexedBisection:
        """Y h Y^{-1}, back from the corner into the stabilized groupoid."""
        hb = self._as_indexed(h)
        rng, src = _element_indices(hb)
        left = IndexedBisection.empty(self.unitary.graph)
        for i in sorted(rng):
            left = left.union(
                self.unitary.fiber_at_source_index(i, self.max_stages), validate=False
            )
        right = IndexedBisection.empty(self.unitary.graph)
        for j in sorted(src):
            right = right.union(
                self.unitary.fiber_at_source_index(j, self.max_stages), validate=False
            )
        return indexed_compose(indexed_compose(left, hb), indexed_inverse(right))

    def lands_in_corner(self, result: IndexedBisection) -> bool:
        k = self.unitary.clopen
        for bis, _ in result.components:
            if not range_of(bis).is_subset(k) or not source_of(bis).is_subset(k):
                return False
        return True


def conjugate(unitary: StagedUnitary, g, max_stages=None) -> IndexedBisection:
    """Convenience wrapper for a one-off forward conjugation."""
    return CornerIsomorphism(unitary, max_stages).forward(g)


# -- Kakutani equivalence -------------------------------------------------------


@dataclass(frozen=True)
class KakutaniCertificate:
    ok: bool
    checks: tuple

    def describe(self):
        lines = []
        for name, passed, detail in self.checks:
            mark = "pass" if passed else "FAIL"
            suffix = f" ({detail})" if detail is not None and not passed else ""
            lines.append(f"[{mark}] {name}{suffix}")
        return "\n".join(lines)


def kakutani_check(
    graph_e,
    clopen_x: ClopenSet,
    graph_f,
    clopen_y: ClopenSet,
    iso_pairs,
    depth=4,
    max_products=5000,
):
    """Verify a claimed corner isomorphism witnessing Kakutani equivalence.

    ``iso_pairs`` is a finite list of (atom over graph_e, atom over graph_f)
    generator pairs.  The check requires both clopen sets to be full, every
    generator to live in its corner, and the induced map to stay consistent
    under the closure by inverses and products of atoms up to ``depth``.
    A failed product consistency or an empty/nonempty mismatch is a
    malformed isomorphism and fails the certificate.
    """
    checks = []
    obs = fullness_obstruction(graph_e, clopen_x)
    checks.append(("left clopen set is full", obs is None, obs))
    obs_y = fullness_obstruction(graph_f, clopen_y)
    checks.append(("right clopen set is full", obs_y is None, obs_y))
    if obs is not None or obs_y is not None:
        return KakutaniCertificate(False, tuple(checks))

    seeds = []
    corner_ok = True
    corner_detail = None
    for a, b in iso_pairs:
        pa = Bisection(graph_e, [a]) if not isinstance(a, Bisection) else a
        pb = Bisection(graph_f, [b]) if not isinstance(b, Bisection) else b
        for bis, clopen, side in (
            (pa, clopen_x, "left"),
            (pb, clopen_y, "right"),
        ):
            if not range_of(bis).is_subset(clopen) or not source_of(bis).is_subset(clopen):
                corner_ok = False
                corner_detail = f"{side} atom {bis!r} leaves its corner"
        seeds.append((pa, pb))
    checks.append(("generators lie in the corners", corner_ok, corner_detail))
    if not corner_ok:
        return KakutaniCertificate(False, tuple(checks))

    seeds.append((Bisection.identity(clopen_x), Bisection.identity(clopen_y)))
    mapping = {}
    worklist = []

    def note(p, q):
        if p.is_empty() != q.is_empty():
            return ("empty/nonempty mismatch", p, q)
        if p.is_empty():
            return None
        if p in mapping:
            if mapping[p] != q:
                return ("inconsistent images", p, (mapping[p], q))
            return None
        mapping[p] = q
        worklist.append((p, q))
        return None

    conflict = None
    for p, q in seeds:
        conflict = conflict or note(p, q) or note(inverse(p), inverse(q))
    products = 0
    while worklist and conflict is None:
        p, q = worklist.pop()
        for p2, q2 in list(mapping.items()):
            for left, right in (((p, q), (p2, q2)), ((p2, q2), (p, q))):
                products += 1
                if products > max_products:
                    raise GroupoidkitError(
                        "closure budget exhausted; lower the depth or raise max_products"
                    )
                prod = compose(left[0], right[0])
                if prod.max_path_len() > depth:
                    continue
                img = compose(left[1], right[1])
                if img.max_path_len() > depth:
                    continue
                conflict = note(prod, img) or note(inverse(prod), inverse(img))
                if conflict:
                    break
            if conflict:
                break
    checks.append(
        (
            f"closure consistent over {len(mapping)} bisections ({products} products)",
            conflict is None,
            conflict,
        )
    )
    return KakutaniCertificate(conflict is None, tuple(checks))
