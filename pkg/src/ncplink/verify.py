"""Exhaustive checks of the finite lemmas, each returning a Report.

A lemma that fails is reported as ``falsified-claim`` with its witnesses; it
never raises.  Heavy sweeps can fan out over worker processes.  Work is cut
into contiguous chunks and merged back in order, so the Report does not
depend on the number of workers.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from .apartments import (
    SearchStats,
    all_spanning_trees,
    apartment_contains,
    are_opposite,
    chambers_of,
    chords_cross,
    cosine,
    dominant_vertices,
    enumerate_nc_trees,
    is_dominant,
    leaf_apartment,
    shortcut_pair,
    smallest_block,
    star_apartment,
    subforest_partitions,
    vertex_coords,
)
from .complex import (
    DiagonalLink,
    LinearEmbedding,
    adjacent_vertices,
    adjacent_via_chambers,
    dihedral_face_canonical,
    dual_face,
    embedding_for,
    face_key,
    graph_girth,
    has_coconsecutive_corank,
    has_rank3_gap,
    is_universal_chainface,
    link_graph,
    turning_candidates,
)
from .errors import EmbeddingInvalid, TooLarge, UnknownLemma
from .lattice import GradedLattice, is_complemented, is_graded, is_modular
from .linalg import GF2, QQ, FieldSpec, Subspace, all_subspaces, contains, subspace_from_vectors
from .partitions import (
    Partition,
    build_ncp,
    build_pn,
    dihedral_canonical,
    embed_linear,
    is_universal_face,
    kreweras_dual,
    rotate,
    subspace_to_partition,
)

PASS = "pass"
FAIL = "fail"
FALSIFIED = "falsified-claim"


@dataclass
class Report:
    lemma_id: str
    n: int
    field: str
    status: str
    counterexamples: list[str] = dc_field(default_factory=list)
    statistics: dict[str, int] = dc_field(default_factory=dict)
    elapsed_ms: int = 0
    table: list[dict] | None = None

    def as_dict(self) -> dict:
        out = {
            "lemma_id": self.lemma_id,
            "n": self.n,
            "field": self.field,
            "status": self.status,
            "counterexamples": list(self.counterexamples),
            "statistics": {k: int(v) for k, v in sorted(self.statistics.items())},
            "elapsed_ms": int(self.elapsed_ms),
        }
        if self.table is not None:
            out["table"] = self.table
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        d = json.loads(text)
        return cls(
            d["lemma_id"],
            d["n"],
            d["field"],
            d["status"],
            d.get("counterexamples", []),
            d.get("statistics", {}),
            d.get("elapsed_ms", 0),
            d.get("table"),
        )

    def to_markdown(self) -> str:
        return render_markdown(self.as_dict())

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _cell(x) -> str:
    # partition strings use the table separator
    return str(x).replace("|", "\\|")


def render_markdown(d: dict) -> str:
    """Markdown view of a Report dictionary; nothing is recomputed here."""
    lines = [
        f"# {d['lemma_id']} (n={d['n']}, field={d['field']})",
        "",
        f"**status:** {d['status']}  ",
        f"**elapsed_ms:** {d['elapsed_ms']}",
        "",
        "## statistics",
        "",
        "| key | value |",
        "|---|---|",
    ]
    lines += [f"| {k} | {v} |" for k, v in d["statistics"].items()]
    lines += ["", "## counterexamples", ""]
    if d["counterexamples"]:
        lines += [f"- `{c}`" for c in d["counterexamples"]]
    else:
        lines.append("none")
    if d.get("table"):
        cols = list(d["table"][0])
        lines += ["", "## table", "", "| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        for row in d["table"]:
            lines.append("| " + " | ".join(_cell(row[c]) for c in cols) + " |")
    return "\n".join(lines) + "\n"


# -- shared plumbing -------------------------------------------------------------------


@lru_cache(maxsize=None)
def ncp_link(n: int) -> DiagonalLink:
    return DiagonalLink(build_ncp(n))


def _chunks(count: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, count))
    step, extra = divmod(count, parts)
    out, lo = [], 0
    for k in range(parts):
        hi = lo + step + (k < extra)
        out.append((lo, hi))
        lo = hi
    return [c for c in out if c[0] < c[1]]


def pmap(worker: Callable, args: Sequence[tuple], jobs: int) -> list:
    """Ordered map; with jobs > 1 the calls run in worker processes."""
    if jobs <= 1 or len(args) <= 1:
        return [worker(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futures = [ex.submit(worker, *a) for a in args]
        return [f.result() for f in futures]


def _merge_counts(parts: Sequence[dict]) -> dict[str, int]:
    total: Counter = Counter()
    for p in parts:
        total.update(p)
    return dict(total)


def _face_str(parts: Sequence[Partition]) -> str:
    return " < ".join(map(str, parts))


# -- duality / complements / embedding ----------------------------------------------------


def check_duality(n: int, field: FieldSpec, jobs: int):
    L = build_ncp(n)
    bad: list[str] = []
    dual = [L.index[kreweras_dual(p)] for p in L.labels]
    if len(set(dual)) != L.element_count:
        bad.append("dual is not injective")
    for a, p in enumerate(L.labels):
        d = L.labels[dual[a]]
        if d.rank != n - 1 - p.rank:
            bad.append(f"rank: {p} -> {d}")
        if kreweras_dual(d) != rotate(p, -1):
            bad.append(f"rotation: {p} -> {d} -> {kreweras_dual(d)}")
    pairs = 0
    for a in range(L.element_count):
        for b in range(L.element_count):
            if a != b and L.leq(a, b):
                pairs += 1
                if not L.leq(dual[b], dual[a]):
                    bad.append(f"order: {L.labels[a]} <= {L.labels[b]}")
    stats = {"elements": L.element_count, "comparable_pairs": pairs, "rotation_offset": -1}
    return bad, stats


def check_complementedness(n: int, field: FieldSpec, jobs: int):
    L = build_ncp(n)
    bad = []
    for a, p in enumerate(L.labels):
        d = L.index[kreweras_dual(p)]
        if L.meet(a, d) != L.bottom or L.join(a, d) != L.top:
            bad.append(f"{p} and {kreweras_dual(p)} are not complements")
    stats = {"elements": L.element_count, "lattice_complemented": int(is_complemented(L))}
    return bad, stats


def _check_embedding(L: GradedLattice, field: FieldSpec, name: str) -> list[str]:
    bad = []
    emb = LinearEmbedding(L, field)
    try:
        emb.check_order()
    except EmbeddingInvalid as exc:
        bad.append(f"{name}: {exc}")
    for p, W in zip(L.labels, emb.image):
        if W.dim != p.rank:
            bad.append(f"{name}: dim f({p}) = {W.dim} != rank {p.rank}")
        if subspace_to_partition(W) != p:
            bad.append(f"{name}: inverse fails at {p}")
    return bad


def fano_missing(field: FieldSpec = GF2) -> int:
    """Proper non-trivial subspaces of V (n=4) not hit by the NCP_4 link vertices."""
    X = ncp_link(4)
    hit = {embed_linear(X.lattice.labels[v], field) for v in X.vertices}
    proper = [W for W in all_subspaces(4, field) if 0 < W.dim < 3]
    return len([W for W in proper if W not in hit])


def check_linear_embedding(n: int, field: FieldSpec, jobs: int):
    bad = _check_embedding(build_pn(n), field, "P") + _check_embedding(build_ncp(n), field, "NCP")
    stats = {"pn_elements": build_pn(n).element_count, "ncp_elements": build_ncp(n).element_count}
    if n == 4 and field == GF2:
        stats["fano_missing"] = fano_missing(field)
        stats["link_vertices"] = len(ncp_link(4).vertices)
        if stats["fano_missing"] != 2:
            bad.append(f"{stats['fano_missing']} Fano vertices missing, expected 2")
    return bad, stats


# -- apartments and trees ---------------------------------------------------------------------


def _apartment_chunk(n: int, lo: int, hi: int):
    bad = []
    nc = 0
    ncp = set(build_ncp(n).labels)
    for edges in all_spanning_trees(n)[lo:hi]:
        crossing = any(chords_cross(e, f) for e, f in combinations(edges, 2))
        verts = subforest_partitions(edges, n)
        inside = all(p in ncp for p in verts)
        nc += not crossing
        tree = ",".join(f"{a}-{b}" for a, b in edges)
        if inside == crossing:
            bad.append(f"tree {tree}: crossing={crossing} but apartment inside NCP={inside}")
        if len(verts) != 2 ** (n - 1) - 2:
            bad.append(f"tree {tree}: {len(verts)} apartment vertices")
        # each vertex is the span of its subset of the tree basis
        for p, S in verts.items():
            rows = []
            for k in S:
                a, b = edges[k - 1]
                r = [0] * n
                r[a - 1], r[b - 1] = 1, -1
                rows.append(r)
            if subspace_from_vectors(rows, QQ, n) != embed_linear(p, QQ):
                bad.append(f"tree {tree}: span mismatch at {p}")
    return bad, {"nc_trees": nc}


def check_apartment_tree(n: int, field: FieldSpec, jobs: int):
    count = len(all_spanning_trees(n))
    parts = pmap(_apartment_chunk, [(n, lo, hi) for lo, hi in _chunks(count, jobs)], jobs)
    bad = [b for p in parts for b in p[0]]
    stats = _merge_counts([p[1] for p in parts])
    stats["spanning_trees"] = count
    stats["enumerated_nc_trees"] = len(enumerate_nc_trees(n))
    if stats["enumerated_nc_trees"] != stats["nc_trees"]:
        bad.append("direct enumeration disagrees with the filtered spanning trees")
    return bad, stats


# -- small links ---------------------------------------------------------------------------------


def check_points_ncp3(n: int, field: FieldSpec, jobs: int):
    X = ncp_link(3)
    edges = [f for f in X.faces if len(f) == 2]
    bad = []
    if len(X.vertices) != 3 or edges:
        bad.append(f"link has {len(X.vertices)} vertices and {len(edges)} edges")
    return bad, {"vertices": len(X.vertices), "edges": len(edges)}


def check_girth_ncp4(n: int, field: FieldSpec, jobs: int):
    X = ncp_link(4)
    g, _ = graph_girth(X)
    adj = link_graph(X)
    bad = []
    if g != 6:
        bad.append(f"girth {g}")
    # exact metric anchors in the apartment of the path tree
    edge_len_ok = 1
    for C in X.chambers:
        a, b = (X.lattice.labels[i] for i in C.chain)
        for A in _apartments_through(a, b):
            Sa, Sb = A.vertices[a], A.vertices[b]
            if not cosine(vertex_coords(Sa, 4), vertex_coords(Sb, 4)).equals(Fraction(1, 2)):
                edge_len_ok = 0
                bad.append(f"edge {a} < {b} is not pi/3")
    return bad, {
        "vertices": len(adj),
        "edges": sum(len(v) for v in adj.values()) // 2,
        "girth_edges": g or 0,
        "edges_pi_over_3": edge_len_ok,
    }


def _apartments_through(*verts: Partition):
    from .apartments import nc_apartments

    return [A for A in nc_apartments(verts[0].n) if apartment_contains(A, verts)]


# -- turning candidates ---------------------------------------------------------------------------


def _turning_chunk(n: int, field_text: str, lo: int, hi: int):
    field = FieldSpec.parse(field_text)
    X = ncp_link(n)
    faces = X.faces[lo:hi]
    found = turning_candidates(X, field, faces)
    emb = embedding_for(X, field)
    # the same scan with adjacency read off chambers, and with the rank-3-gap convention
    adj_mismatch = 0
    for F in faces:
        a1 = adjacent_vertices(X, F)
        if a1 != adjacent_via_chambers(X, F):
            adj_mismatch += 1
    gap = []
    for F in faces:
        if has_rank3_gap(F):
            adj = adjacent_vertices(X, F)
            if any(emb.fails(a, b) for a, b in combinations(adj, 2)):
                gap.append(F.chain)
    gap_mismatch = len(set(gap) ^ {F.chain for F in found})
    coco = sum(1 for F in faces if has_coconsecutive_corank(F))
    return [F.chain for F in found], {
        "faces_scanned": len(faces),
        "coconsecutive_faces": coco,
        "adjacency_discrepancies": adj_mismatch,
        "convention_discrepancies": gap_mismatch,
    }


@lru_cache(maxsize=None)
def _candidates(n: int, field_text: str, jobs: int = 1):
    X = ncp_link(n)
    parts = pmap(
        _turning_chunk,
        [(n, field_text, lo, hi) for lo, hi in _chunks(len(X.faces), jobs)],
        jobs,
    )
    chains = [c for p in parts for c in p[0]]
    stats = _merge_counts([p[1] for p in parts])
    return tuple(chains), stats


def candidate_faces(n: int, field: FieldSpec = QQ, jobs: int = 1) -> list[tuple[Partition, ...]]:
    """Turning candidates of the NCP_n link as rank-sorted partition tuples."""
    X = ncp_link(n)
    chains, _ = _candidates(n, str(field), jobs)
    return [tuple(X.lattice.labels[i] for i in c) for c in chains]


def _field_discrepancy(n: int, field: FieldSpec, jobs: int) -> int:
    """1 when the candidate set over ``field`` differs from the one over Q."""
    if field == QQ:
        return 0
    return int(_candidates(n, str(field), jobs)[0] != _candidates(n, "q", jobs)[0])


PAPER_NCP5_FACE = "1,2,3,4|5"
PAPER_NCP5_PAIR = ("1,2|3,4|5", "1,4|2,3|5")


def check_turning_ncp5(n: int, field: FieldSpec, jobs: int):
    X = ncp_link(5)
    L = X.lattice
    chains, stats = _candidates(5, str(field), jobs)
    faces = [[L.labels[i] for i in c] for c in chains]
    bad = []
    ranks = Counter()
    for f in faces:
        if len(f) != 1 or not is_universal_face(f) or f[0].rank not in (1, 3):
            bad.append(f"non-universal or wrong-rank candidate {_face_str(f)}")
        else:
            ranks[f[0].rank] += 1
    emb = embedding_for(X, field)
    v = L.index[Partition.parse(PAPER_NCP5_FACE)]
    a, b = (L.index[Partition.parse(s)] for s in PAPER_NCP5_PAIR)
    adj = adjacent_vertices(X, X.face([v]))
    found = int(a in adj and b in adj and emb.fails(a, b))
    if not found:
        bad.append(f"pair {PAPER_NCP5_PAIR} does not fail modularity next to {PAPER_NCP5_FACE}")
    stats = dict(stats)
    stats.update(
        candidates=len(faces),
        all_universal=int(all(is_universal_face(f) for f in faces)),
        rank1=ranks[1],
        rank3=ranks[3],
        paper_pair_found=found,
        field_discrepancy=_field_discrepancy(5, field, jobs),
    )
    return bad, stats


# The four cases for n=6, as (family, rank-set of the face, dominant vertex).
FAMILIES = {
    1: (["1|2,4|3|5|6"], [(1,), (1, 2), (1, 4)]),
    2: (["1,2|3,4|5|6", "1,2|3|4,5|6"], [(2,), (1, 2)]),
    3: (["1,2,3,5|4|6", "1,2,4,5|3|6"], [(3,), (3, 4)]),
    4: (["1,2,3,4|5,6"], [(4,), (3, 4), (1, 4)]),
}
DUAL_FAMILY = {1: 4, 2: 3, 3: 2, 4: 1}


def family_signatures() -> set[tuple[tuple[int, ...], str, int]]:
    """(face ranks, canonical dominant vertex, family) triples the cases allow."""
    out = set()
    for fam, (reps, rank_sets) in FAMILIES.items():
        for r in reps:
            u = str(dihedral_canonical(Partition.parse(r)))
            for rs in rank_sets:
                out.add((rs, u, fam))
    return out


def _family_of(u: Partition) -> int | None:
    cu = str(dihedral_canonical(u))
    for fam, (reps, _) in FAMILIES.items():
        if any(str(dihedral_canonical(Partition.parse(r))) == cu for r in reps):
            return fam
    return None


def classify_turning_faces(n: int, field: FieldSpec = QQ, jobs: int = 1, timing: bool = False) -> Report:
    """Dihedral orbit table of the turning candidates for n in {5, 6}.

    elapsed_ms stays 0 unless ``timing`` is set, so reports are byte-stable.
    """
    if n not in (5, 6):
        raise TooLarge(f"classification is defined for n = 5, 6, not {n}")
    t0 = time.perf_counter()
    faces = candidate_faces(n, field, jobs)
    orbits: dict[tuple[str, ...], list] = {}
    for f in faces:
        orbits.setdefault(face_key(dihedral_face_canonical(f)), []).append(f)
    keys = sorted(orbits, key=lambda k: (len(k), [Partition.parse(s).rank for s in k], k))
    index = {k: i for i, k in enumerate(keys)}
    table = []
    for k in keys:
        rep = tuple(Partition.parse(s, n) for s in k)
        dom = dominant_vertices(rep)
        dual_key = face_key(dihedral_face_canonical(dual_face(rep)))
        universal = is_universal_face(rep)
        fam = None if universal or not dom else _family_of(dom[0])
        table.append(
            {
                "orbit": index[k],
                "kind": "vertex" if len(rep) == 1 else "edge",
                "ranks": ",".join(str(p.rank) for p in rep),
                "representative": _face_str(rep),
                "size": len(orbits[k]),
                "universal": int(universal),
                "dominant": str(dom[0]) if dom else "-",
                "family": fam if fam is not None else "-",
                "dual_orbit": index.get(dual_key, -1),
            }
        )
    stats = {
        "candidates": len(faces),
        "orbits": len(keys),
        "universal_orbits": sum(r["universal"] for r in table),
        "non_universal_orbits": sum(1 - r["universal"] for r in table),
    }
    return Report(
        "classify-turning", n, str(field), PASS, [], stats,
        int((time.perf_counter() - t0) * 1000) if timing else 0, table,
    )


def check_turning_ncp6(n: int, field: FieldSpec, jobs: int):
    bad = []
    _, base = _candidates(6, str(field), jobs)
    faces = [f for f in candidate_faces(6, field, jobs) if not is_universal_face(f)]
    found = set()
    dominance_checks = 0
    for f in faces:
        dom = dominant_vertices(f)
        dominance_checks += len(f)
        if len(dom) != 1:
            bad.append(f"{_face_str(f)} has {len(dom)} dominant vertices")
            continue
        u = dom[0]
        fam = _family_of(u)
        sig = (tuple(p.rank for p in f), str(dihedral_canonical(u)), fam)
        found.add(sig)
    expected = family_signatures()
    for sig in sorted(found - expected, key=str):
        bad.append(f"unexpected case: ranks {sig[0]}, dominant {sig[1]}")
    for sig in sorted(expected - found, key=str):
        bad.append(f"case not realised: ranks {sig[0]}, dominant {sig[1]}")
    # every listed dominant vertex is dominant in each face realising its case
    for fam, (reps, _) in FAMILIES.items():
        for r in reps:
            if not is_dominant(Partition.parse(r), [Partition.parse(r)]):
                bad.append(f"{r} is not dominant in its own vertex face")
    # duality pairs the families
    dual_ok = 1
    orbit_keys = {face_key(dihedral_face_canonical(f)) for f in faces}
    for f in faces:
        if face_key(dihedral_face_canonical(dual_face(f))) not in orbit_keys:
            dual_ok = 0
            bad.append(f"dual of {_face_str(f)} is not a candidate")
    for fam, (reps, _) in FAMILIES.items():
        for r in reps:
            d = _family_of(kreweras_dual(Partition.parse(r)))
            if d != DUAL_FAMILY[fam]:
                bad.append(f"dual of {r} lands in family {d}")
                dual_ok = 0
    stats = {
        "candidates": len(candidate_faces(6, field, jobs)),
        "non_universal": len(faces),
        "non_universal_orbits": len({face_key(dihedral_face_canonical(f)) for f in faces}),
        "case_signatures": len(found),
        "expected_signatures": len(expected),
        "duality_closed": dual_ok,
        "dominance_checks": dominance_checks,
        "apartments": len(enumerate_nc_trees(6)),
        "field_discrepancy": _field_discrepancy(6, field, jobs),
        "adjacency_discrepancies": base["adjacency_discrepancies"],
        "convention_discrepancies": base["convention_discrepancies"],
    }
    return bad, stats


# -- constructive apartments -------------------------------------------------------------------------


U_TABLE = {
    "1|2,4|3|5|6": ["U", "2,4", "U", "2,4", "U", "U"],
    "1,2|3,4|5|6": ["1,2", "1,2", "3,4", "3,4", "U", "U"],
    "1,2|3|4,5|6": ["1,2", "1,2", "U", "4,5", "4,5", "U"],
}


def u_table_row(u: Partition) -> list[str]:
    n = u.n
    out = []
    for i in range(1, n + 1):
        b = smallest_block([u], i, n)
        out.append("U" if len(b) == n else ",".join(map(str, b)))
    return out


def _shortcut_chunk(field_text: str, faces: list[tuple[Partition, ...]]):
    bad = []
    stats = SearchStats()
    pairs: Counter = Counter()
    for face in faces:
        dom = dominant_vertices(face)
        if not dom:
            bad.append(f"{_face_str(face)} has no dominant vertex")
            continue
        u = dom[0]
        for C in chambers_of(6):
            try:
                res = shortcut_pair(face, C, u, stats)
            except Exception as exc:  # reported, not raised
                bad.append(f"{_face_str(face)} / {_face_str(C)}: {exc}")
                continue
            ok = (
                apartment_contains(res.face_apartment, [*face, res.v, res.w])
                and apartment_contains(res.chamber_apartment, [*C, res.v, res.w])
                and are_opposite(res.v, res.w)
                and is_universal_face([res.v, res.w])
            )
            if not ok:
                bad.append(f"{_face_str(face)} / {_face_str(C)}: postcondition")
            pairs[f"pair_{res.i}_{res.j}"] += 1
    counts = dict(pairs)
    counts.update(nodes=stats.nodes, backtracks=stats.backtracks)
    return bad, counts


def check_shortcut_ncp6(n: int, field: FieldSpec, jobs: int):
    faces = [f for f in candidate_faces(6, field, jobs) if not is_universal_face(f)]
    args = [(str(field), faces[lo:hi]) for lo, hi in _chunks(len(faces), jobs)]
    parts = pmap(_shortcut_chunk, args, jobs)
    bad = [b for p in parts for b in p[0]]
    stats = _merge_counts([p[1] for p in parts])
    rows_ok = 0
    for r, want in U_TABLE.items():
        got = u_table_row(Partition.parse(r))
        if got == want:
            rows_ok += 1
        else:
            bad.append(f"u_i table row {r}: got {got}, expected {want}")
    stats.update(
        faces=len(faces),
        chambers=len(chambers_of(6)),
        checks=len(faces) * len(chambers_of(6)),
        table_rows_matched=rows_ok,
    )
    return bad, stats


def universal_chambers(n: int) -> list[tuple[Partition, ...]]:
    return [c for c in chambers_of(n) if is_universal_face(c)]


def _star_chunk(n: int, lo: int, hi: int):
    bad = []
    stats = SearchStats()
    for C in universal_chambers(n)[lo:hi]:
        for C2 in chambers_of(n):
            try:
                A = star_apartment(C, C2, stats)
            except Exception as exc:
                bad.append(f"{_face_str(C)} / {_face_str(C2)}: {exc}")
                continue
            if not apartment_contains(A, [*C, *C2]):
                bad.append(f"{_face_str(C)} / {_face_str(C2)}: apartment misses a vertex")
    return bad, {"nodes": stats.nodes, "backtracks": stats.backtracks, "order_switches": stats.order_switches}


def check_star_universal(n: int, field: FieldSpec, jobs: int):
    U = universal_chambers(n)
    parts = pmap(_star_chunk, [(n, lo, hi) for lo, hi in _chunks(len(U), jobs)], jobs)
    bad = [b for p in parts for b in p[0]]
    stats = _merge_counts([p[1] for p in parts])
    stats.update(universal_chambers=len(U), chambers=len(chambers_of(n)), pairs=len(U) * len(chambers_of(n)))
    return bad, stats


def admissible_leaf_cases(n: int):
    for C in chambers_of(n):
        for i in range(1, n + 1):
            for j in (i % n + 1, (i - 2) % n + 1):
                if j in smallest_block(C, i, n):
                    yield C, i, j


def _leaf_chunk(n: int, lo: int, hi: int):
    bad = []
    stats = SearchStats()
    cases = list(admissible_leaf_cases(n))[lo:hi]
    for C, i, j in cases:
        tag = f"{_face_str(C)}, i={i}, j={j}"
        try:
            A, v, w = leaf_apartment(C, i, j, stats)
        except Exception as exc:
            bad.append(f"{tag}: {exc}")
            continue
        if not apartment_contains(A, [*C, v, w]):
            bad.append(f"{tag}: apartment misses a vertex")
        if A.tree.degree(i) != 1 or not are_opposite(v, w):
            bad.append(f"{tag}: {i} is not a leaf or v, w not opposite")
    return bad, {"nodes": stats.nodes, "backtracks": stats.backtracks}


def check_leaf_tree(n: int, field: FieldSpec, jobs: int):
    count = sum(1 for _ in admissible_leaf_cases(n))
    parts = pmap(_leaf_chunk, [(n, lo, hi) for lo, hi in _chunks(count, jobs)], jobs)
    bad = [b for p in parts for b in p[0]]
    stats = _merge_counts([p[1] for p in parts])
    stats.update(cases=count, chambers=len(chambers_of(n)))
    return bad, stats


def check_universal_chamber(n: int, field: FieldSpec, jobs: int):
    X = ncp_link(n)
    uchambers = [set(C.chain) for C in X.chambers if is_universal_chainface(C)]
    bad = []
    count = 0
    for F in X.faces:
        if not is_universal_chainface(F):
            continue
        count += 1
        if not any(set(F.chain) <= C for C in uchambers):
            bad.append(f"{F} extends to no universal chamber")
    return bad, {"universal_faces": count, "universal_chambers": len(uchambers), "faces": len(X.faces)}


# -- modular lattices ------------------------------------------------------------------------------------


def subspace_label(W: Subspace) -> str:
    if not W.basis:
        return "0"
    return "<" + "; ".join(" ".join(str(x) for x in r) for r in W.basis) + ">"


def subspace_lattice(n: int, field: FieldSpec) -> GradedLattice:
    """S(V) for V the zero-sum hyperplane of F^n; finite fields only."""
    subs = all_subspaces(n, field)
    up = []
    for a in subs:
        mask = 0
        for j, b in enumerate(subs):
            if b.dim >= a.dim and contains(b, a):
                mask |= 1 << j
        up.append(mask)
    return GradedLattice(subs, up)


def scan_failing_pairs(
    L: GradedLattice, field: FieldSpec = QQ, image=None
) -> list[tuple[object, object]]:
    """Unordered incomparable pairs whose sum or intersection leaves the image.

    Raises EmbeddingInvalid when the embedding does not respect the order.
    """
    emb = LinearEmbedding(L, field, image)
    emb.check_order()
    out = []
    for a, b in combinations(range(L.element_count), 2):
        if emb.fails(a, b):
            out.append((L.labels[a], L.labels[b]))
    return out


def check_modular_no_failing(n: int, field: FieldSpec, jobs: int):
    pos_field = GF2 if field.is_rational else field
    S = subspace_lattice(n, pos_field)
    mod, _ = is_modular(S)
    comp = is_complemented(S)
    graded = is_graded(S)
    pos_pairs = scan_failing_pairs(S, pos_field)
    N = build_ncp(n)
    nmod, _ = is_modular(N)
    neg_pairs = scan_failing_pairs(N, field)
    bad = []
    if not (mod and comp and graded):
        bad.append(f"S(V) over {pos_field}: modular={mod} complemented={comp} graded={graded}")
    if mod and pos_pairs:
        bad += [f"S(V) pair {subspace_label(a)} / {subspace_label(b)}" for a, b in pos_pairs]
    if nmod and neg_pairs:
        bad.append("NCP is modular yet has failing pairs")
    if not neg_pairs:
        bad.append("NCP has no failing pairs")
    stats = {
        "subspace_lattice_elements": S.element_count,
        "subspace_lattice_modular": int(mod),
        "subspace_lattice_complemented": int(comp),
        "subspace_lattice_graded": int(graded),
        "subspace_failing_pairs": len(pos_pairs),
        "ncp_modular": int(nmod),
        "ncp_failing_pairs": len(neg_pairs),
        "positive_field_p": pos_field.p or 0,
    }
    return bad, stats


# -- registry -------------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Lemma:
    check: Callable
    sizes: tuple[int, ...]
    field_sensitive: bool = False


REGISTRY: dict[str, Lemma] = {
    "duality": Lemma(check_duality, (1, 2, 3, 4, 5, 6, 7)),
    "linear-embedding": Lemma(check_linear_embedding, (1, 2, 3, 4, 5, 6), True),
    "apartment-tree": Lemma(check_apartment_tree, (2, 3, 4, 5, 6)),
    "girth-ncp4": Lemma(check_girth_ncp4, (4,)),
    "points-ncp3": Lemma(check_points_ncp3, (3,)),
    "turning-ncp5": Lemma(check_turning_ncp5, (5,), True),
    "turning-ncp6": Lemma(check_turning_ncp6, (6,), True),
    "shortcut-ncp6": Lemma(check_shortcut_ncp6, (6,), True),
    "star-universal": Lemma(check_star_universal, (3, 4, 5, 6)),
    "leaf-tree": Lemma(check_leaf_tree, (3, 4, 5, 6)),
    "universal-chamber": Lemma(check_universal_chamber, (3, 4, 5, 6)),
    "modular-no-failing": Lemma(check_modular_no_failing, (4, 5), True),
    "complementedness": Lemma(check_complementedness, (1, 2, 3, 4, 5, 6, 7)),
}


def verify(
    lemma_id: str, n: int, field: FieldSpec = QQ, jobs: int = 1, timing: bool = False
) -> Report:
    """Run one registered check.

    ``elapsed_ms`` stays 0 unless ``timing`` is set, so that reports of
    identical runs are byte-identical.
    """
    lemma = REGISTRY.get(lemma_id)
    if lemma is None:
        raise UnknownLemma(f"unknown lemma {lemma_id!r}; known: {', '.join(REGISTRY)}")
    if n not in lemma.sizes:
        raise TooLarge(f"{lemma_id} is defined for n in {list(lemma.sizes)}, not {n}")
    t0 = time.perf_counter()
    bad, stats = lemma.check(n, field, max(1, jobs))
    elapsed = int((time.perf_counter() - t0) * 1000) if timing else 0
    return Report(lemma_id, n, str(field), FALSIFIED if bad else PASS, bad, stats, elapsed)
