"""Command-line front end.

Every subcommand prints a line-oriented report, or with ``--json`` a JSON
object carrying the same data. Exit codes:

    0  success / property holds
    1  property fails (check, tree, qi, matching) or an obstruction (comm)
    2  unreadable or invalid input
    3  validate found violations
    4  comm: every test was inapplicable
    5  --verify found a disagreement with a brute-force oracle
    6  a search hit its size guard
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .blocks import (augmented_graph_of_blocks, block_graphs, block_names, check_m1, check_m2,
                     classify_torsion_qi)
from .commensurability import (CommVerdict, Verdict, block_obstruction, enumerate_matchings, genus_family,
                               matching_obstruction, matching_vector)
from .dot import export_dot
from .errors import InvalidInputError, NoMatchingError, ResourceLimitError
from .graph import PManifold, validate_chi_decoration, validate_jsj_graph, validate_pmanifold
from .io import GraphDocument, MatrixDocument, dumps_graph, load, matrix_to_obj
from .oracles import (MAX_MATCHING_SURFACES, MAX_PARTITION_VERTICES,
                      coarsest_equitable_bruteforce, matchings_bruteforce, unrooted_tree_code)
from .refinement import degree_partition, degree_refinement, is_quasi_isometric
from .splitting import unwrap_to_tree

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVALID, EXIT_INAPPLICABLE, EXIT_VERIFY, EXIT_RESOURCE = range(7)


@dataclass
class Report:
    code: int = EXIT_OK
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    mismatches: list[str] = field(default_factory=list)

    def add(self, line: str) -> None:
        self.lines.append(line)


# ----------------------------------------------------------------------
# input helpers


def _graph_of(doc):
    if isinstance(doc, MatrixDocument):
        return augmented_graph_of_blocks(doc.refinement)
    return doc.graph


def _refinement_of(doc):
    if isinstance(doc, MatrixDocument):
        doc.refinement.require_well_formed()
        return doc.refinement
    problems = validate_jsj_graph(doc.graph)
    if problems:
        raise InvalidInputError("not a JSJ graph: " + "; ".join(problems))
    return degree_refinement(doc.graph)


def _pmanifold_of(doc, label: str = "input") -> PManifold:
    if not isinstance(doc, GraphDocument):
        raise InvalidInputError(f"{label} must be a graph document with chi values")
    p = doc.to_pmanifold()
    problems = validate_pmanifold(p, strict=False, connected=False)
    if problems:
        raise InvalidInputError(f"{label}: " + "; ".join(problems))
    return p


def _write(path: str | None, text: str, report: Report, key: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
        report.add(f"wrote {path}")
    else:
        report.data[key] = text


def _verify_partition(g, report: Report) -> None:
    if len(g) > MAX_PARTITION_VERTICES:
        report.add(f"verify: partition skipped ({len(g)} vertices > {MAX_PARTITION_VERTICES})")
        return
    ok = degree_partition(g).as_sets() == coarsest_equitable_bruteforce(g).as_sets()
    report.add("verify: partition " + ("OK" if ok else "MISMATCH"))
    if not ok:
        report.mismatches.append("partition")


def _perm_text(M, M2, perm) -> str:
    a, b = block_names(M), block_names(M2)
    return " ".join(f"{a[i]}->{b[perm(i)]}" for i in range(M.order))


# ----------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> Report:
    doc = load(args.input)
    r = Report()
    if isinstance(doc, MatrixDocument):
        problems = doc.refinement.problems()
    elif args.strict:
        try:
            problems = validate_pmanifold(doc.to_pmanifold(), strict=True)
        except InvalidInputError as exc:
            problems = [str(exc)]
    else:
        problems = validate_jsj_graph(doc.graph)
        if doc.chi:
            problems += validate_chi_decoration(doc.graph, doc.chi)
    r.data["violations"] = problems
    if problems:
        r.code = EXIT_INVALID
        r.add(f"invalid: {len(problems)} violation(s)")
        r.lines += [f"- {p}" for p in problems]
    else:
        r.add("valid")
    return r


def cmd_refine(args) -> Report:
    doc = load(args.input)
    g = _graph_of(doc)
    M = degree_refinement(g)
    names = block_names(M)
    r = Report()
    for name, kind, members in zip(names, M.kinds, M.partition.blocks):
        r.add(f"block {name} ({kind.letter}): {' '.join(members)}")
    r.lines += M.to_text().splitlines()
    r.data["partition"] = {n: list(b) for n, b in zip(names, M.partition.blocks)}
    r.data["matrix"] = matrix_to_obj(M)
    if args.verify:
        _verify_partition(g, r)
    return r


def cmd_blocks(args) -> Report:
    doc = load(args.input)
    M = _refinement_of(doc)
    bg = block_graphs(M)
    r = Report()
    r.add("graph of blocks:")
    r.lines += [f"  {u} -- {v}" for u, v, _ in bg.simple.edges()]
    r.add("augmented graph of blocks:")
    r.lines += [f"  {u} -- {v} x{m}" for u, v, m in bg.augmented.edges()]
    r.data["graph_of_blocks"] = [[u, v] for u, v, _ in bg.simple.edges()]
    r.data["augmented"] = [[u, v, m] for u, v, m in bg.augmented.edges()]
    return r


def _m_lines(m1, m2) -> list[str]:
    if m1:
        l1 = "M1: PASS"
    elif m1.cycle:
        l1 = "M1: FAIL cycle " + " ".join(m1.cycle)
    else:
        l1 = "M1: FAIL graph of blocks is disconnected"
    if m2:
        l2 = "M2: PASS"
    else:
        i, j = m2.witness.pair
        l2 = f"M2: FAIL path {' '.join(m2.witness.path)} pair ({i},{j})"
    return [l1, l2]


def _m_data(m1, m2) -> dict:
    return {
        "M1": {"holds": m1.holds, "cycle": list(m1.cycle) if m1.cycle else None},
        "M2": {"holds": m2.holds,
               "path": list(m2.witness.path) if m2.witness else None,
               "pair": list(m2.witness.pair) if m2.witness else None},
    }


def cmd_check(args) -> Report:
    doc = load(args.input)
    M = _refinement_of(doc)
    m1, m2 = check_m1(M), check_m2(M)
    r = Report(EXIT_OK if m1 and m2 else EXIT_FAIL)
    r.lines += _m_lines(m1, m2)
    r.data.update(_m_data(m1, m2))
    if args.verify:
        if m1:
            alt = check_m2(M, method="tree")
            ok = alt.holds == m2.holds and alt.witness == m2.witness
            r.add("verify: M2 tree walk " + ("OK" if ok else "MISMATCH"))
            if not ok:
                r.mismatches.append("M2")
        if isinstance(doc, GraphDocument):
            _verify_partition(doc.graph, r)
    return r


def cmd_tree(args) -> Report:
    doc = load(args.input)
    src = doc.refinement if isinstance(doc, MatrixDocument) else doc.graph
    verdict = classify_torsion_qi(src)
    r = Report(EXIT_OK if verdict else EXIT_FAIL)
    r.lines += _m_lines(verdict.m1, verdict.m2)
    r.data.update(_m_data(verdict.m1, verdict.m2))
    if not verdict:
        r.add("torsion-generated: no")
        return r
    tree = verdict.tree.renamed(f"{doc.name or 'input'} tree")
    r.add("torsion-generated: yes")
    for rec in verdict.trace:
        r.add(f"split {rec.t} {rec.f} r={rec.r}")
    r.add(f"tree: {len(tree)} vertices, {tree.edge_count} edges")
    r.data["trace"] = [rec.to_dict() for rec in verdict.trace]
    r.data["vertices"] = len(tree)
    _write(args.out, dumps_graph(tree), r, "tree")
    if args.verify:
        g0 = augmented_graph_of_blocks(verdict.refinement)
        ok = bool(is_quasi_isometric(g0, tree)) and tree.is_tree()
        r.add("verify: tree refinement " + ("OK" if ok else "MISMATCH"))
        if not ok:
            r.mismatches.append("tree")
        other = unwrap_to_tree(g0, order="outermost").tree
        same = unrooted_tree_code(other) == unrooted_tree_code(tree)
        # Agreement across split orders is observed, not guaranteed, so it never fails the run.
        r.add("verify: outermost split order gives " + ("an isomorphic tree" if same else "a different tree"))
        _verify_partition(g0, r)
    return r


def cmd_qi(args) -> Report:
    d1, d2 = load(args.first), load(args.second)
    verdict = is_quasi_isometric(_graph_of(d1), _graph_of(d2))
    r = Report(EXIT_OK if verdict else EXIT_FAIL)
    r.data["quasi_isometric"] = verdict.equivalent
    if verdict:
        text = _perm_text(verdict.first, verdict.second, verdict.permutation)
        r.add("quasi-isometric: yes")
        r.add("permutation: " + text)
        r.data["permutation"] = list(verdict.permutation.mapping)
    else:
        r.add("quasi-isometric: no")
    if args.verify:
        if verdict:
            ok = verdict.first.permuted(verdict.permutation) == verdict.second
            r.add("verify: permutation " + ("OK" if ok else "MISMATCH"))
            if not ok:
                r.mismatches.append("permutation")
        for d in (d1, d2):
            _verify_partition(_graph_of(d), r)
    return r


def cmd_comm(args) -> Report:
    d1, d2 = load(args.first), load(args.second)
    for label, d in (("first", d1), ("second", d2)):
        if not isinstance(d, GraphDocument):
            raise InvalidInputError(f"{label} input must be a graph document with chi values")
    verdicts = [block_obstruction((d1.graph, d1.chi), (d2.graph, d2.chi), blockwise=args.blockwise)]
    try:
        pa, pb = _pmanifold_of(d1, "first"), _pmanifold_of(d2, "second")
    except InvalidInputError as exc:
        verdicts.append(CommVerdict("matching", Verdict.INAPPLICABLE, reason=str(exc)))
    else:
        verdicts.append(matching_obstruction(pa, pb, check_invariance=args.all_optimal))
    r = Report()
    r.lines += [v.line() for v in verdicts]
    r.data["verdicts"] = [v.to_dict() for v in verdicts]
    kinds = {v.verdict for v in verdicts}
    if Verdict.OBSTRUCTED in kinds:
        r.code = EXIT_FAIL
    elif Verdict.NOT_OBSTRUCTED not in kinds:
        r.code = EXIT_INAPPLICABLE
    return r


def cmd_matching(args) -> Report:
    doc = load(args.input)
    p = _pmanifold_of(doc)
    r = Report()
    try:
        mv = matching_vector(p, check_invariance=args.all_optimal)
    except NoMatchingError as exc:
        r.code = EXIT_FAIL
        r.add(f"no matching: layer {exc.layer} admits none")
        r.data["no_matching_layer"] = exc.layer
    else:
        r.add(f"vector: {mv.vector}")
        for i, (m, x) in enumerate(zip(mv.layers, mv.entries), 1):
            r.add(f"layer {i}: {m} chi {x}")
        r.lines += [f"diagnostic: {d}" for d in mv.diagnostics]
        r.data["vector"] = str(mv.vector)
        r.data["layers"] = [list(m.chosen) for m in mv.layers]
        r.data["diagnostics"] = list(mv.diagnostics)
    if args.verify:
        if len(p.graph.surfaces) > MAX_MATCHING_SURFACES:
            r.add("verify: matchings skipped (too many surfaces)")
        else:
            ok = enumerate_matchings(p) == matchings_bruteforce(p)
            r.add("verify: matchings " + ("OK" if ok else "MISMATCH"))
            if not ok:
                r.mismatches.append("matchings")
    return r


def cmd_family(args) -> Report:
    doc = load(args.input)
    p = _pmanifold_of(doc)
    q = genus_family(p, args.vertex, args.genus)
    r = Report()
    r.add(f"chi({args.vertex}): {p.chi.get(args.vertex)} -> {q.chi[args.vertex]}")
    r.data["chi"] = q.chi[args.vertex]
    _write(args.out, dumps_graph(q), r, "document")
    return r


def cmd_dot(args) -> Report:
    doc = load(args.input)
    g = _graph_of(doc)
    notes = {v: f"chi={x}" for v, x in doc.chi.items()} if isinstance(doc, GraphDocument) else {}
    r = Report()
    text = export_dot(g, notes)
    if args.out:
        _write(args.out, text, r, "dot")
    else:
        r.lines += text.rstrip("\n").splitlines()
        r.data["dot"] = text
    return r


# ----------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--verify", action="store_true",
                        help="re-check results against brute-force oracles where small enough")

    parser = argparse.ArgumentParser(prog="jsjtree", description=(
        "Quasi-isometry and commensurability invariants of JSJ graphs."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text, inputs=("input",)):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        for arg in inputs:
            p.add_argument(arg, help="graph or matrix JSON document")
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "report violations of the input conditions")
    p.add_argument("--strict", action="store_true",
                   help="check P-manifold conditions, including curve valence at least 3")
    add("refine", cmd_refine, "print the degree partition and degree refinement")
    add("blocks", cmd_blocks, "print the graph of blocks and the augmented graph of blocks")
    add("check", cmd_check, "check conditions M1 and M2")
    p = add("tree", cmd_tree, "build a tree with the same degree refinement when M1 and M2 hold")
    p.add_argument("--out", help="write the tree document here")
    add("qi", cmd_qi, "decide quasi-isometry of two inputs", inputs=("first", "second"))
    p = add("comm", cmd_comm, "run the commensurability obstructions on two inputs",
            inputs=("first", "second"))
    p.add_argument("--blockwise", action="store_true",
                   help="compare block sums along block correspondences instead of sorted")
    p.add_argument("--all-optimal", action="store_true",
                   help="check matching vectors over every optimal choice")
    p = add("matching", cmd_matching, "print the matching Euler characteristic vector")
    p.add_argument("--all-optimal", action="store_true",
                   help="check the vector over every optimal choice")
    p = add("family", cmd_family, "replace one surface by a higher-genus surface")
    p.add_argument("--vertex", required=True, help="surface vertex id")
    p.add_argument("--genus", required=True, type=int, help="genus g >= 1")
    p.add_argument("--out", help="write the modified document here")
    p = add("dot", cmd_dot, "export Graphviz DOT")
    p.add_argument("--out", help="write DOT text here")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if report.mismatches:
        report.code = EXIT_VERIFY
    if args.json:
        data = {"command": args.command, "exit": report.code, **report.data}
        if args.verify:
            data["verify_mismatches"] = report.mismatches
        print(json.dumps(data, indent=2, default=str))
    else:
        for line in report.lines:
            print(line)
        if "document" in report.data or "tree" in report.data:
            sys.stdout.write(report.data.get("document") or report.data.get("tree"))
    return report.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
