"""Brute-force reference semantics for the symbolic machinery.

Everything here enumerates boundary prefixes and arrow triples explicitly
at a fixed resolution and computes set operations pointwise.  It is kept
deliberately independent of the normal-form algebra so symbolic results can
be checked against it; the agreement guarantee needs the resolution to
exceed the operands' maximal path length by a margin (two is enough for all
operations in the suite).

An arrow at resolution D is a triple ``(x, k, y)`` where x and y are
boundary prefixes truncated to depth exactly D (shorter only when complete);
the truncation of a groupoid element is unique, so set comparison at equal
resolution is faithful once the margin is respected.

Fullness is special: truncated prefixes cannot witness it (an unsaturated
periodic orbit may have saturated completions), so the orbit oracle tests
concrete eventually-periodic points and complete points instead, deciding
saturation of each by bounded path enumeration.
"""

from __future__ import annotations

from .boundary import Path, path_range


def tails_from(graph, vertex, depth):
    """Boundary prefixes from ``vertex``: complete ones up to ``depth``,
    truncated ones at exactly ``depth``."""
    out = []
    stack = [Path(vertex)]
    while stack:
        p = stack.pop()
        r = path_range(graph, p)
        if graph.is_sink(r) or len(p) == depth:
            out.append(p)
        else:
            for eid in graph.out_edges(r):
                stack.append(p.extend(eid))
    return out


def all_points(graph, depth):
    pts = set()
    for v in graph.vertices:
        pts.update(tails_from(graph, v, depth))
    return pts


def truncate_point(graph, path, depth):
    return path.prefix(depth) if len(path) > depth else path


def clopen_points(clopen, depth):
    """The resolution-``depth`` points of a clopen set."""
    pts = set()
    for leaf in clopen.leaves:
        if len(leaf) >= depth:
            pts.add(truncate_point(clopen.graph, leaf, depth))
            continue
        r = path_range(clopen.graph, leaf)
        for tail in tails_from(clopen.graph, r, depth - len(leaf)):
            pts.add(Path(leaf.start, leaf.edges + tail.edges))
    return pts


def atom_arrows(graph, atom, depth, index=None):
    """Resolution-``depth`` triples of one arrow atom, optionally tagged with
    an index pair."""
    arrows = set()
    r = path_range(graph, atom.alpha)
    tail_depth = max(depth - min(len(atom.alpha), len(atom.beta)), 0)
    k = atom.degree
    for tail in tails_from(graph, r, tail_depth):
        if atom.excluded:
            if not tail.edges:
                if not graph.is_sink(r):
                    continue  # tail too shallow to apply the exclusion
            elif tail.edges[0] in atom.excluded:
                continue
        x = truncate_point(graph, Path(atom.alpha.start, atom.alpha.edges + tail.edges), depth)
        y = truncate_point(graph, Path(atom.beta.start, atom.beta.edges + tail.edges), depth)
        arrows.add((x, k, y) if index is None else (x, k, y, index))
    return arrows


def bisection_arrows(b, depth):
    arrows = set()
    for atom in b.atoms:
        arrows |= atom_arrows(b.graph, atom, depth)
    return arrows


def indexed_arrows(b, depth):
    """Triples of an indexed bisection; finite-pair components only."""
    from .indexsets import FinitePairs

    arrows = set()
    for bis, fam in b.components:
        if not isinstance(fam, FinitePairs):
            raise ValueError("oracle enumeration needs finite index parts")
        for pair in fam.pairs:
            for atom in bis.atoms:
                arrows |= atom_arrows(b.graph, atom, depth, index=pair)
    return arrows


def arrows_compose(arrows_u, arrows_v):
    """Pointwise composition of two equal-resolution arrow sets.

    Faithful only when the common resolution exceeds the target depth by the
    operands' maximal path length (truncated middles must still pin the
    shared tail); use :func:`brute_compose` for the padded version.
    """
    out = set()
    for u in arrows_u:
        for v in arrows_v:
            if len(u) == 4:
                x, k, y, (i, j) = u
                x2, k2, y2, (i2, j2) = v
                if j != i2 or y != x2:
                    continue
                out.add((x, k + k2, y2, (i, j2)))
            else:
                x, k, y = u
                x2, k2, y2 = v
                if y != x2:
                    continue
                out.add((x, k + k2, y2))
    return out


def truncate_arrows(graph, arrows, depth):
    out = set()
    for a in arrows:
        x, k, y = a[:3]
        t = (truncate_point(graph, x, depth), k, truncate_point(graph, y, depth))
        if len(a) == 4:
            t = t + (a[3],)
        out.add(t)
    return out


def _operand_arrows(b, depth):
    from .groupoid import IndexedBisection

    if isinstance(b, IndexedBisection):
        return indexed_arrows(b, depth)
    return bisection_arrows(b, depth)


def _operand_max_len(b):
    from .groupoid import IndexedBisection

    if isinstance(b, IndexedBisection):
        return max(
            (bis.max_path_len() for bis, _ in b.components), default=0
        )
    return b.max_path_len()


def brute_compose(u, v, depth):
    """Resolution-``depth`` arrows of the product, computed pointwise at a
    padded internal resolution so middle matching stays exact."""
    pad = max(_operand_max_len(u), _operand_max_len(v))
    big = depth + pad
    raw = arrows_compose(_operand_arrows(u, big), _operand_arrows(v, big))
    return truncate_arrows(u.graph, raw, depth)


def arrows_inverse(arrows):
    out = set()
    for a in arrows:
        if len(a) == 4:
            x, k, y, (i, j) = a
            out.add((y, -k, x, (j, i)))
        else:
            x, k, y = a
            out.add((y, -k, x))
    return out


def arrows_range(arrows):
    return {a[0] for a in arrows}


def arrows_source(arrows):
    return {a[2] for a in arrows}


def arrows_restrict(arrows, point_set):
    return {a for a in arrows if a[0] in point_set and a[2] in point_set}


def is_injective_on_ranges(arrows):
    seen = {}
    for a in arrows:
        key = a[0] if len(a) == 3 else (a[0], a[3][0])
        val = a[1:]
        if key in seen and seen[key] != val:
            return False
        seen[key] = val
    return True


# -- the orbit oracle for fullness -------------------------------------------


def _exists_path(graph, src, dst, max_len):
    # plain bounded DFS, no reachability shortcuts
    stack = [(src, 0)]
    while stack:
        v, n = stack.pop()
        if v == dst:
            return True
        if n >= max_len:
            continue
        for eid in graph.out_edges(v):
            stack.append((graph.edge_dst(eid), n + 1))
    return False


def test_points(graph, depth):
    """Concrete boundary points probing every orbit: all complete prefixes of
    length <= depth and all eventually-periodic points with prefix and cycle
    of length <= depth."""
    pts = []
    for v in graph.vertices:
        for p in tails_from(graph, v, depth):
            if graph.is_sink(path_range(graph, p)):
                pts.append(("finite", p, None))
        # cycles through v
        stack = [Path(v)]
        cycles = []
        while stack:
            p = stack.pop()
            r = path_range(graph, p)
            if p.edges and r == v:
                cycles.append(p)
            if len(p) >= depth:
                continue
            for eid in graph.out_edges(r):
                stack.append(p.extend(eid))
        for cyc in cycles:
            pts.append(("periodic", Path(v), cyc))
            for eid in graph.in_edges(v):
                pts.append(("periodic", Path(graph.edge_src(eid), (eid,)), cyc))
    return pts


def _tail_start_vertices(graph, kind, prefix, cycle):
    verts = set()
    v = prefix.start
    verts.add(v)
    for eid in prefix.edges:
        v = graph.edge_dst(eid)
        verts.add(v)
    if kind == "periodic":
        for eid in cycle.edges:
            verts.add(graph.edge_src(eid))
    return verts


def _point_suffixes(graph, path):
    return [Path(path_range(graph, path.prefix(m)), path.edges[m:]) for m in range(len(path) + 1)]


def point_saturated(graph, clopen, point, path_bound=None):
    """Exact saturation check of one test point against a clopen set."""
    kind, prefix, cycle = point
    if path_bound is None:
        path_bound = len(graph.vertices)
    starts = _tail_start_vertices(graph, kind, prefix, cycle)
    for leaf in clopen.leaves:
        r = path_range(graph, leaf)
        if graph.is_sink(r):
            if kind != "finite":
                continue
            # finite point matches a complete leaf iff some suffixes coincide
            for s1 in _point_suffixes(graph, prefix):
                for s2 in _point_suffixes(graph, leaf):
                    if s1 == s2:
                        return True
        else:
            for v in starts:
                if _exists_path(graph, r, v, path_bound):
                    return True
    return False


def is_full_oracle(graph, clopen, depth):
    """Orbit check of fullness over the depth-bounded test points."""
    for point in test_points(graph, depth):
        if not point_saturated(graph, clopen, point):
            return False
    return True
