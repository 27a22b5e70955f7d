"""Command-line surface: thin wrappers over the library plus formatting.

Every command builds a CommandReport (command echo, input digest, payload,
check list) and exits 0 exactly when all checks pass.  ``--format json``
prints the report as stable JSON for machine consumption.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path as FsPath

from . import bgr as bgrmod
from . import oracle
from .boundary import ClopenSet, Path, clopen_from_text, enumerate_boundary
from .errors import GroupoidkitError, NotFullError
from .graphs import DirectedGraph, builtin_graph, builtin_names, parse_graph
from .groupoid import (
    Bisection,
    bisection_from_text,
    compose,
    cross_with_R,
    indexed_compose,
    inverse,
    range_of,
    source_of,
)
from .indexsets import CylPairFamily, FinitePairs
from .intmat import bowen_franks, certify_distinct, smith_normal_form, unit_minus_transpose
from .stab import (
    MoveRecord,
    MoveSequence,
    apply_move,
    from_stabilized_atom,
    graphs_isomorphic,
    legal_moves,
    find_move_sequence,
    stabilize,
    to_stabilized_atom,
)


@dataclass
class CommandReport:
    command: str
    inputs_digest: str
    payload: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def check(self, name, ok, witness=None):
        self.checks.append((name, bool(ok), witness))
        return ok

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    def exit_code(self):
        return 0 if self.ok else 1

    def to_json(self):
        return json.dumps(
            {
                "command": self.command,
                "inputs_digest": self.inputs_digest,
                "payload": self.payload,
                "checks": [
                    {"name": n, "pass": ok, "witness": _plain(w)}
                    for n, ok, w in self.checks
                ],
                "ok": self.ok,
            },
            sort_keys=True,
            indent=2,
            default=str,
        )

    def to_text(self):
        lines = [f"$ {self.command}", f"inputs: sha256:{self.inputs_digest[:16]}"]
        for key, value in self.payload.items():
            rendered = value if isinstance(value, str) else json.dumps(_plain(value), default=str)
            lines.append(f"{key}: {rendered}")
        for name, ok, witness in self.checks:
            mark = "pass" if ok else "FAIL"
            suffix = f"  witness: {witness}" if witness is not None and not ok else ""
            lines.append(f"[{mark}] {name}{suffix}")
        return "\n".join(lines)


def _plain(value):
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _digest(*texts):
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode())
        h.update(b"\x00")
    return h.hexdigest()


def load_graph(spec: str) -> tuple:
    """A builtin name or a file path; returns (graph, source text)."""
    if spec in builtin_names():
        g = builtin_graph(spec)
        return g, g.serialize()
    path = FsPath(spec)
    if not path.exists():
        raise GroupoidkitError(
            f"{spec!r} is neither a builtin graph ({', '.join(builtin_names())}) nor a file"
        )
    text = path.read_text()
    return parse_graph(text), text


def _resolve_seed(args):
    env = os.environ.get("GROUPOIDKIT_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _path_word(graph, p):
    return ".".join(str(e) for e in p.edges) if p.edges else str(p.start)


def _atom_word(graph, atom):
    excl = ""
    if atom.excluded:
        excl = " \\ {%s}" % ",".join(sorted(map(str, atom.excluded)))
    return f"({_path_word(graph, atom.alpha)}|{_path_word(graph, atom.beta)}{excl})"


# -- subcommands ---------------------------------------------------------------


def cmd_invariants(args):
    graph, text = load_graph(args.graph)
    report = CommandReport(f"invariants {args.graph}", _digest(text))
    matrix = graph.adjacency_matrix()
    m = unit_minus_transpose(matrix)
    bf = bowen_franks(graph)
    snf = smith_normal_form(m)
    report.payload["adjacency"] = matrix.to_lists()
    report.payload["unit_minus_transpose"] = m.to_lists()
    report.payload["det"] = bf.determinant
    report.payload["invariant_factors"] = list(bf.invariant_factors)
    report.payload["free_rank"] = bf.free_rank
    report.payload["cokernel"] = bf.describe()
    try:
        snf.verify()
        report.check("smith decomposition verified", True)
    except AssertionError as exc:
        report.check("smith decomposition verified", False, str(exc))
    return report


def cmd_compare(args):
    graph_a, text_a = load_graph(args.graph_a)
    graph_b, text_b = load_graph(args.graph_b)
    report = CommandReport(
        f"compare {args.graph_a} {args.graph_b}", _digest(text_a, text_b)
    )
    cert = certify_distinct(graph_a, graph_b)
    report.payload["certificate"] = cert.describe()
    if cert.distinguished:
        report.payload["verdict"] = "Distinguished"
        return report
    if graphs_isomorphic(graph_a, graph_b):
        report.payload["verdict"] = "MoveEquivalent"
        report.payload["sequence"] = []
        return report
    if args.search_moves is not None:
        seq = find_move_sequence(graph_a, graph_b, budget=args.search_moves)
        if seq is not None:
            report.payload["verdict"] = "MoveEquivalent"
            report.payload["sequence"] = [r.format_line() for r in seq.records]
            return report
        report.payload["note"] = f"move search exhausted budget {args.search_moves}"
    report.payload["verdict"] = "Inconclusive"
    return report


def cmd_bgr(args):
    graph, text = load_graph(args.graph)
    report = CommandReport(
        f"bgr {args.graph} {args.clopen} --stages {args.stages}",
        _digest(text, args.clopen),
    )
    clopen = clopen_from_text(graph, args.clopen)
    if not isinstance(clopen, ClopenSet):
        raise GroupoidkitError("the corner set must be unindexed")
    report.payload["clopen"] = repr(clopen)
    try:
        unitary = bgrmod.unitary_stages(graph, clopen, args.stages)
    except NotFullError as exc:
        report.check("clopen set is full", False, exc.witness)
        return report
    report.check("clopen set is full", True)
    report.payload["cover_size"] = len(unitary.cover)
    for name, ok, detail in unitary.stage_checks(args.stages):
        report.check(name, ok, detail)
    if args.conjugate:
        element = bisection_from_text(graph, args.conjugate)
        iso = bgrmod.CornerIsomorphism(unitary)
        image = iso.forward(element)
        report.payload["conjugate"] = _dump_indexed(graph, image)
        report.check("conjugate lands in the corner", iso.lands_in_corner(image))
        back = iso.backward(image)
        from .groupoid import indexed_equal

        report.check("backward(forward(g)) == g", indexed_equal(back, element))
    if args.dump_stages:
        report.payload["stages"] = _dump_stages(graph, unitary)
    return report


def _dump_indexed(graph, indexed):
    lines = []
    for bis, fam in indexed.components:
        if isinstance(fam, FinitePairs):
            for i, j in sorted(fam.pairs):
                for atom in bis.atoms:
                    lines.append(f"{_atom_word(graph, atom)}@({i},{j})")
        else:
            for atom in bis.atoms:
                lines.append(
                    f"{_atom_word(graph, atom)}@family(wr={fam.wr}, ws={fam.ws}, rest~{fam.rest.sample(4)})"
                )
    return lines


def _dump_stages(graph, unitary):
    out = []
    for idx, stage in enumerate(unitary.stages, start=1):
        for line in _dump_indexed(graph, stage):
            out.append(f"Y{idx}: {line}")
    return out


def cmd_stabilize(args):
    graph, text = load_graph(args.graph)
    report = CommandReport(
        f"stabilize {args.graph} --check-depth {args.check_depth}", _digest(text)
    )
    se = stabilize(graph)
    report.payload["heads"] = sorted(se.heads)
    d = args.check_depth
    atoms = []
    for alpha in (p.path for p in enumerate_boundary(graph, d)):
        for beta in (p.path for p in enumerate_boundary(graph, d)):
            from .boundary import path_range

            if path_range(graph, alpha) != path_range(graph, beta):
                continue
            atoms.append((alpha, beta))
    from .groupoid import ArrowAtom

    failures = 0
    total = 0
    for alpha, beta in atoms:
        for index in ((0, 0), (1, 0), (d, 1)):
            total += 1
            atom = ArrowAtom(alpha, beta)
            image = to_stabilized_atom(se, atom, index)
            back, back_index = from_stabilized_atom(se, image)
            if back != atom or back_index != index:
                failures += 1
    report.payload["roundtrip_atoms"] = total
    report.check(f"stabilization roundtrip at depth {d}", failures == 0, failures)
    return report


def _parse_move_spec(graph, spec):
    tokens = spec.split()
    if len(tokens) < 2:
        raise GroupoidkitError("move spec is '<kind> <vertex> [{e1,e2}|{e3}]'")
    kind, vertex = tokens[0], tokens[1]
    partition = None
    if len(tokens) > 2:
        blocks = []
        for block in "".join(tokens[2:]).split("|"):
            block = block.strip().strip("{}")
            blocks.append(frozenset(tok.strip() for tok in block.split(",") if tok.strip()))
        partition = tuple(blocks)
    return MoveRecord(kind, vertex, partition)


def cmd_move(args):
    graph, text = load_graph(args.graph)
    report = CommandReport(f"move {args.graph} {args.move!r}", _digest(text, args.move))
    record = _parse_move_spec(graph, args.move)
    after = apply_move(graph, record)
    report.payload["result"] = after.serialize()
    before_bf = bowen_franks(graph)
    after_bf = bowen_franks(after)
    report.payload["det_before"] = before_bf.determinant
    report.payload["det_after"] = after_bf.determinant
    report.check("determinant preserved", before_bf.determinant == after_bf.determinant)
    report.check(
        "cokernel preserved",
        (
            tuple(d for d in before_bf.invariant_factors if d != 1),
            before_bf.free_rank,
        )
        == (
            tuple(d for d in after_bf.invariant_factors if d != 1),
            after_bf.free_rank,
        ),
    )
    return report


def cmd_replay(args):
    graph, text = load_graph(args.graph)
    seq_text = FsPath(args.sequence).read_text()
    report = CommandReport(
        f"replay {args.graph} {args.sequence}", _digest(text, seq_text)
    )
    seq = MoveSequence.parse(seq_text)
    result = seq.replay(graph)
    report.payload["moves"] = len(seq)
    report.payload["result"] = result.serialize()
    before_bf = bowen_franks(graph)
    after_bf = bowen_franks(result)
    report.check("determinant preserved", before_bf.determinant == after_bf.determinant)
    return report


def cmd_export_dot(args):
    graph, text = load_graph(args.graph)
    report = CommandReport(f"export-dot {args.graph}", _digest(text))
    lines = [f"digraph {json.dumps(graph.name)} {{"]
    for v in graph.vertices:
        lines.append(f"  {json.dumps(v)};")
    for e in graph.edges:
        lines.append(f"  {json.dumps(e.src)} -> {json.dumps(e.dst)} [label={json.dumps(e.id)}];")
    lines.append("}")
    dot = "\n".join(lines) + "\n"
    if args.output:
        FsPath(args.output).write_text(dot)
        report.payload["written"] = args.output
    else:
        report.payload["dot"] = dot
    return report


def cmd_selftest(args):
    seed = _resolve_seed(args)
    rng = random.Random(seed)
    report = CommandReport(f"selftest --seed {seed}", _digest(str(seed)))
    t0 = time.time()

    e2 = builtin_graph("E2")
    e2m = builtin_graph("E2minus")
    report.check("det(1 - A^t) of E2 is -1", bowen_franks(e2).determinant == -1)
    report.check("det(1 - A^t) of E2minus is 1", bowen_franks(e2m).determinant == 1)
    report.check(
        "E2 and E2minus distinguished", certify_distinct(e2, e2m).distinguished
    )

    # random composition vs the pointwise oracle
    mismatches = 0
    for _ in range(50):
        u = _random_bisection(rng, e2m, max_len=2)
        v = _random_bisection(rng, e2m, max_len=2)
        depth = max(u.max_path_len(), v.max_path_len()) + 2
        sym = oracle.bisection_arrows(compose(u, v), depth)
        brute = oracle.brute_compose(u, v, depth)
        if sym != brute:
            mismatches += 1
    report.check("composition agrees with the arrow oracle (50 samples)", mismatches == 0)

    # Smith normal form on random matrices
    from .intmat import IntegerMatrix, det as exact_det

    bad = 0
    for _ in range(25):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = IntegerMatrix(
            [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        )
        try:
            smith_normal_form(m).verify()
        except AssertionError:
            bad += 1
    report.check("smith normal form verified on 25 random matrices", bad == 0)

    # staged unitary invariants
    unitary = bgrmod.unitary_stages(e2, ClopenSet.from_edge_word(e2, ["a"]), 2)
    report.check(
        "staged unitary identities (E2, Z(a), n=2)",
        all(ok for _, ok, _ in unitary.stage_checks(2)),
    )

    # move invariance
    violations = 0
    for record in legal_moves(e2m, max_split_edges=3):
        after = apply_move(e2m, record)
        if bowen_franks(after).determinant != bowen_franks(e2m).determinant:
            violations += 1
    report.check("moves preserve det(1 - A^t) on E2minus", violations == 0)

    report.payload["elapsed_s"] = round(time.time() - t0, 2)
    return report


def _random_bisection(rng, graph, max_len=2):
    from .boundary import path_range

    for _ in range(200):
        paths = [p.path for p in enumerate_boundary(graph, rng.randint(0, max_len))]
        alpha = rng.choice(paths)
        candidates = [
            p
            for p in (
                q.path for q in enumerate_boundary(graph, rng.randint(0, max_len))
            )
            if path_range(graph, p) == path_range(graph, alpha)
        ]
        if not candidates:
            continue
        beta = rng.choice(candidates)
        return Bisection.atom(graph, alpha, beta)
    raise GroupoidkitError("could not sample a bisection")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="groupoidkit",
        description="cylinder/bisection calculus on graph groupoids, "
        "stabilization constructions, graph moves, and exact invariants",
    )
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--seed", type=int, default=0, help="randomized-check seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="adjacency, det(1 - A^t), invariant factors")
    p.add_argument("graph")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("compare", help="Bowen-Franks certificate and move search")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--search-moves", type=int, default=None, metavar="BUDGET")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bgr", help="staged unitary construction and checks")
    p.add_argument("graph")
    p.add_argument("clopen", help="cylinder expression, e.g. 'Z(a)'")
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--conjugate", help="indexed bisection to conjugate, B{...} syntax")
    p.add_argument("--dump-stages", action="store_true")
    p.set_defaults(func=cmd_bgr)

    p = sub.add_parser("stabilize", help="head structure and roundtrip checks")
    p.add_argument("graph")
    p.add_argument("--check-depth", type=int, default=3)
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser("move", help="apply one move, e.g. 'O v {a}|{b}'")
    p.add_argument("graph")
    p.add_argument("move")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("replay", help="replay a move sequence file")
    p.add_argument("graph")
    p.add_argument("sequence")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("export-dot", help="emit a DOT drawing file")
    p.add_argument("graph")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("selftest", help="seeded cross-check suite")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except GroupoidkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if args.format == "json" else report.to_text())
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
