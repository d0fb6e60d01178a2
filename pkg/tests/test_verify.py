import json

import pytest

from ncplink.errors import EmbeddingInvalid, TooLarge, UnknownLemma
from ncplink.linalg import GF2, QQ, FieldSpec
from ncplink.partitions import Partition, build_ncp, dihedral_canonical, kreweras_dual
from ncplink.verify import (
    FAMILIES,
    REGISTRY,
    Report,
    U_TABLE,
    candidate_faces,
    classify_turning_faces,
    family_signatures,
    render_markdown,
    scan_failing_pairs,
    subspace_lattice,
    u_table_row,
    verify,
)

QUICK = [
    ("duality", 5),
    ("complementedness", 5),
    ("linear-embedding", 4),
    ("apartment-tree", 5),
    ("girth-ncp4", 4),
    ("points-ncp3", 3),
    ("turning-ncp5", 5),
    ("star-universal", 5),
    ("leaf-tree", 5),
    ("universal-chamber", 6),
    ("modular-no-failing", 4),
]


@pytest.mark.parametrize("lemma,n", QUICK)
def test_quick_lemmas_pass(lemma, n):
    r = verify(lemma, n)
    assert r.status == "pass" and r.counterexamples == []
    assert all(isinstance(v, int) for v in r.statistics.values())


def test_registry_covers_all_lemma_ids():
    assert set(REGISTRY) >= {
        "duality", "linear-embedding", "apartment-tree", "girth-ncp4", "points-ncp3",
        "turning-ncp5", "turning-ncp6", "shortcut-ncp6", "star-universal",
        "universal-chamber", "modular-no-failing", "complementedness",
    }


def test_unknown_and_out_of_range():
    with pytest.raises(UnknownLemma):
        verify("no-such-lemma", 4)
    with pytest.raises(TooLarge):
        verify("girth-ncp4", 5)
    with pytest.raises(TooLarge):
        classify_turning_faces(4)


def test_girth_and_duality_statistics():
    assert verify("girth-ncp4", 4).statistics["girth_edges"] == 6
    assert verify("duality", 6).statistics["rotation_offset"] == -1


def test_turning_ncp5_statistics_pinned():
    s = verify("turning-ncp5", 5).statistics
    assert s["candidates"] == 10 and s["all_universal"] == 1
    assert s["rank1"] == 5 and s["rank3"] == 5 and s["paper_pair_found"] == 1


def test_gf2_run_reports_no_discrepancy():
    r = verify("turning-ncp5", 5, GF2)
    assert r.status == "pass" and r.statistics["field_discrepancy"] == 0


def test_fano_count_over_gf2():
    assert verify("linear-embedding", 4, GF2).statistics["fano_missing"] == 2


def test_report_json_round_trip_and_markdown():
    r = verify("points-ncp3", 3)
    text = r.to_json()
    back = Report.from_json(text)
    assert back.to_json() == text
    d = json.loads(text)
    assert list(d) == ["lemma_id", "n", "field", "status", "counterexamples", "statistics", "elapsed_ms"]
    md = render_markdown(d)
    assert "points-ncp3" in md and "| vertices | 3 |" in md
    assert r.to_markdown() == md


def test_timing_off_by_default():
    assert verify("duality", 4).elapsed_ms == 0


def test_classify_n5_only_universal():
    r = classify_turning_faces(5)
    assert r.table and all(row["universal"] == 1 for row in r.table)
    assert {row["ranks"] for row in r.table} == {"1", "3"}


def test_classify_n6_rows():
    r = classify_turning_faces(6)
    reps = {(row["ranks"], row["dominant"]) for row in r.table if not row["universal"]}
    canon = lambda s: str(dihedral_canonical(Partition.parse(s, 6)))
    assert ("1", canon("2,4")) in reps
    assert ("2", canon("1,2|3,4")) in reps and ("2", canon("1,2|4,5")) in reps
    fams = {row["family"] for row in r.table if not row["universal"]}
    assert fams == {1, 2, 3, 4}
    # every orbit's dual orbit is in the table and duality is an involution on orbits
    idx = {row["orbit"]: row for row in r.table}
    for row in r.table:
        assert idx[idx[row["dual_orbit"]]["orbit"]]["dual_orbit"] == row["orbit"]


def test_families_are_paired_by_duality():
    for fam, other in [(1, 4), (2, 3)]:
        left = {str(dihedral_canonical(kreweras_dual(Partition.parse(r)))) for r in FAMILIES[fam][0]}
        right = {str(dihedral_canonical(Partition.parse(r))) for r in FAMILIES[other][0]}
        assert left == right
    assert len(family_signatures()) == 14


def test_u_table_rows():
    for r, want in U_TABLE.items():
        assert u_table_row(Partition.parse(r)) == want


def test_scan_failing_pairs_examples():
    ncp5 = scan_failing_pairs(build_ncp(5), QQ)
    pair = (Partition.parse("1,2|3,4|5"), Partition.parse("1,4|2,3|5"))
    assert pair in ncp5 or pair[::-1] in ncp5
    ncp4 = scan_failing_pairs(build_ncp(4), QQ)
    assert (Partition.parse("1,3", 4), Partition.parse("2,4", 4)) in ncp4
    assert scan_failing_pairs(subspace_lattice(4, GF2), GF2) == []


def test_scan_rejects_order_incompatible_embedding():
    L = build_ncp(3)
    S = subspace_lattice(3, GF2)
    # three distinct lines put on the wrong elements
    lines = [W for W in S.labels if W.dim == 1]
    order = sorted(L.labels, key=lambda p: p.rank)
    image = {L.index[order[0]]: S.labels[0], L.index[order[-1]]: lines[0]}
    for k, p in enumerate(order[1:-1]):
        image[L.index[p]] = lines[(k + 1) % len(lines)]
    with pytest.raises(EmbeddingInvalid):
        scan_failing_pairs(L, GF2, image)


def test_candidate_faces_n6_count():
    assert len(candidate_faces(6)) == 162
    assert len(candidate_faces(6, FieldSpec(2))) == 162


@pytest.mark.parametrize("lemma,n", [("turning-ncp6", 6), ("apartment-tree", 5), ("star-universal", 5), ("leaf-tree", 5)])
def test_reports_identical_across_jobs(lemma, n):
    outs = {verify(lemma, n, QQ, jobs).to_json() for jobs in (1, 2, 3)}
    assert len(outs) == 1


def test_classify_timing_off_by_default():
    assert classify_turning_faces(5).elapsed_ms == 0
    assert classify_turning_faces(5, QQ, 1, timing=True).elapsed_ms >= 0
