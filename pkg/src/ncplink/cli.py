"""Command-line front end.

Exit codes: 0 success or pass, 1 fail or falsified claim, 2 usage or input
error.  Reports go to stdout (or ``--output``); diagnostics and figure paths
go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .apartments import chambers_of, enumerate_nc_trees
from .complex import graph_girth, link_graph, parse_edge_file, shortest_cycle
from .errors import NcpLinkError
from .lattice import is_complemented, is_graded, is_lattice, is_modular, parse_cover_file
from .linalg import FieldSpec, format_matrix, subspace_from_vectors
from .partitions import Partition, build_ncp, build_pn, embed_linear, kreweras_dual
from .plotting import angle_label, figures_for, plot_link_graph
from .verify import (
    FAIL,
    PASS,
    REGISTRY,
    Report,
    candidate_faces,
    classify_turning_faces,
    ncp_link,
    scan_failing_pairs,
    verify,
)


class UsageError(Exception):
    pass


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return k


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncplink", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def report_opts(sp):
        sp.add_argument("--field", type=_field, default=FieldSpec())
        sp.add_argument("--jobs", type=_positive, default=1)
        sp.add_argument("--format", choices=("json", "md"), default="json")
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--figure-dir", help="also render PNG figures into this directory")
        sp.add_argument("--timing", action="store_true", help="record elapsed_ms (breaks byte-identity)")

    sp = sub.add_parser("verify", help="run one exhaustive lemma check")
    sp.add_argument("--lemma", required=True, help="one of: " + ", ".join(REGISTRY))
    sp.add_argument("--n", type=int, required=True)
    report_opts(sp)

    sp = sub.add_parser("classify", help="dihedral orbit table of turning candidates")
    sp.add_argument("--n", type=int, required=True)
    report_opts(sp)

    sp = sub.add_parser("enumerate", help="list lattice elements, trees, chambers or candidates")
    sp.add_argument("--what", choices=("ncp", "pn", "trees", "chambers", "candidates"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--field", type=_field, default=FieldSpec())

    sp = sub.add_parser("dual", help="Kreweras dual of a non-crossing partition")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--partition", required=True)

    sp = sub.add_parser("embed", help="RREF basis of the subspace of a partition")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--partition", required=True)
    sp.add_argument("--field", type=_field, default=FieldSpec())

    sp = sub.add_parser("girth", help="girth of the NCP_4 link or of an edge-list graph")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--graph", help="file with one 'u v' edge per line")
    sp.add_argument("--figure-dir")

    sp = sub.add_parser("lattice-check", help="modular/complemented/graded plus failing pairs")
    sp.add_argument("--file", required=True, help="cover relations, one 'a < b' per line")
    sp.add_argument("--embedding", help="lines 'label: v; v; ...' with vectors in F^m")
    report_opts(sp)
    return p


def _emit(report: Report, args) -> None:
    text = report.to_json() if args.format == "json" else report.to_markdown()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.figure_dir:
        for path in figures_for(report.as_dict(), args.figure_dir):
            print(f"figure: {path}", file=sys.stderr)


def _exit_code(report: Report) -> int:
    return 0 if report.status == PASS else 1


def parse_embedding_file(text: str, labels, field: FieldSpec) -> dict:
    """``label: 1 0 1; 0 1 1`` per element; vectors in F^m are lifted into V in F^(m+1).

    The lift appends minus the coordinate sum, an isomorphism F^m -> V.
    An element with no vectors maps to the zero subspace.
    """
    rows: dict[str, list[list[int]]] = {}
    m = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise UsageError(f"embedding line {lineno}: expected 'label: vectors'")
        lab, rest = (s.strip() for s in line.split(":", 1))
        vecs = []
        for chunk in rest.split(";"):
            if chunk.strip():
                v = [int(x) for x in chunk.split()]
                if m is None:
                    m = len(v)
                elif len(v) != m:
                    raise UsageError(f"embedding line {lineno}: vector length {len(v)}, expected {m}")
                vecs.append(v + [-sum(v)])
        rows[lab] = vecs
    missing = [str(x) for x in labels if str(x) not in rows]
    if missing:
        raise UsageError(f"embedding misses {', '.join(missing)}")
    if m is None:
        raise UsageError("embedding gives no vectors at all")
    return {
        i: subspace_from_vectors(rows[str(lab)], field, m + 1) for i, lab in enumerate(labels)
    }


def lattice_check(text: str, field: FieldSpec, embedding_text: str | None = None) -> Report:
    L = parse_cover_file(text)
    table = []
    lat = is_lattice(L)
    stats = {"elements": L.element_count, "lattice": int(lat), "graded": int(is_graded(L))}
    bad: list[str] = []
    if not lat:
        bad.append("not a lattice")
        return Report("lattice-check", L.element_count, str(field), FAIL, bad, stats)
    mod, wit = is_modular(L)
    stats["modular"] = int(mod)
    stats["complemented"] = int(is_complemented(L))
    if wit is not None:
        table.append({"item": "modularity-witness", "value": ", ".join(str(L.labels[k]) for k in wit)})
    if embedding_text is not None:
        image = parse_embedding_file(embedding_text, L.labels, field)
        pairs = scan_failing_pairs(L, field, image)
        stats["failing_pairs"] = len(pairs)
        for a, b in pairs:
            table.append({"item": "failing-pair", "value": f"{a} / {b}"})
        if mod and pairs:
            bad += [f"modular lattice has failing pair {a} / {b}" for a, b in pairs]
    status = FAIL if bad else PASS
    return Report("lattice-check", L.element_count, str(field), status, bad, stats, 0, table)


def _partition(text: str, n: int) -> Partition:
    p = Partition.parse(text, n)
    if p.n != n:
        raise UsageError(f"partition {text!r} is not on 1..{n}")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (NcpLinkError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "verify":
        rep = verify(args.lemma, args.n, args.field, args.jobs, args.timing)
        _emit(rep, args)
        return _exit_code(rep)
    if cmd == "classify":
        rep = classify_turning_faces(args.n, args.field, args.jobs, args.timing)
        _emit(rep, args)
        return _exit_code(rep)
    if cmd == "enumerate":
        for line in _enumerate(args.what, args.n, args.field):
            print(line)
        return 0
    if cmd == "dual":
        print(kreweras_dual(_partition(args.partition, args.n)))
        return 0
    if cmd == "embed":
        W = embed_linear(_partition(args.partition, args.n), args.field)
        print(f"dim {W.dim}")
        if W.basis:
            print(format_matrix(W.basis))
        return 0
    if cmd == "girth":
        X = None
        if args.graph:
            with open(args.graph) as fh:
                adj = parse_edge_file(fh.read())
        else:
            if args.n != 4:
                raise UsageError("girth is defined for the one-dimensional link, n = 4")
            X = ncp_link(4)
            adj = link_graph(X)
        g, _ = graph_girth(adj)
        if g is None:
            print("girth none (acyclic)")
        else:
            print(f"girth {g} edges = {angle_label(g)} at pi/3 per edge")
            print("cycle " + " - ".join(map(str, shortest_cycle(adj))))
        if args.figure_dir and X is not None:
            print(f"figure: {plot_link_graph(X, args.figure_dir)}", file=sys.stderr)
        return 0
    if cmd == "lattice-check":
        with open(args.file) as fh:
            text = fh.read()
        emb = None
        if args.embedding:
            with open(args.embedding) as fh:
                emb = fh.read()
        rep = lattice_check(text, args.field, emb)
        _emit(rep, args)
        return _exit_code(rep)
    raise UsageError(f"unknown command {cmd}")


def _enumerate(what: str, n: int, field: FieldSpec):
    if what == "ncp":
        yield from map(str, build_ncp(n).labels)
    elif what == "pn":
        yield from map(str, build_pn(n).labels)
    elif what == "trees":
        yield from map(str, enumerate_nc_trees(n))
    elif what == "chambers":
        if n < 3:
            raise UsageError("chambers need n >= 3")
        for C in chambers_of(n):
            yield " < ".join(map(str, C))
    elif what == "candidates":
        if n < 3:
            raise UsageError("candidates need n >= 3")
        for f in candidate_faces(n, field):
            yield " < ".join(map(str, f))


def main() -> None:
    sys.exit(run())
