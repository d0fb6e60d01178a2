import pytest
from hypothesis import given, settings, strategies as st

from ncplink.errors import Crossing, InvalidPartition, TooLarge
from ncplink.linalg import GF2, QQ, contains, subspace_from_vectors, whole
from ncplink.partitions import (
    Partition,
    build_ncp,
    build_pn,
    dihedral_canonical,
    dihedral_group,
    dihedral_images,
    embed_linear,
    is_cyclic_arc,
    is_noncrossing,
    is_universal_vertex,
    kreweras_dual,
    reflect,
    rotate,
    set_partitions,
    smallest_block,
    subspace_to_partition,
)

from oracles import (
    bell,
    catalan,
    contained_over_q,
    crossing_by_quadruples,
    gf2_partition_space,
    gf2_span,
    kreweras_by_interleaving,
    partition_subspace_dim,
)

P = Partition.parse


def random_partition(n):
    labels = st.lists(st.integers(0, n - 1), min_size=n, max_size=n)

    def build(lab):
        groups = {}
        for x, g in enumerate(lab, 1):
            groups.setdefault(g, []).append(x)
        return Partition(n, tuple(tuple(b) for b in groups.values()))

    return labels.map(build)


def test_parse_and_str():
    p = P("3|1,2|4")
    assert str(p) == "1,2|3|4"
    assert P("1,2", 4) == p
    assert p.rank == 1
    with pytest.raises(InvalidPartition):
        P("1,2|2,3")
    with pytest.raises(InvalidPartition):
        P("1,x")
    with pytest.raises(InvalidPartition):
        Partition(3, ((1, 2),))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7).flatmap(random_partition))
def test_string_round_trip(p):
    assert P(str(p), p.n) == p


@pytest.mark.parametrize("n", range(1, 7))
def test_sizes(n):
    assert build_ncp(n).element_count == catalan(n)
    assert build_pn(n).element_count == bell(n)
    assert build_ncp(n).total_rank == n - 1


def test_size_guard():
    with pytest.raises(TooLarge):
        build_ncp(9)


def test_noncrossing_examples():
    assert is_noncrossing(P("1,3|2|4"))
    assert not is_noncrossing(P("1,3|2,4"))
    # {1,2,6} and {3,5} sit on disjoint arcs, so this one is non-crossing
    assert is_noncrossing(P("1,2,6|3,5|4"))
    assert not crossing_by_quadruples([{1, 2, 6}, {3, 5}, {4}])


@pytest.mark.parametrize("n", range(1, 8))
def test_noncrossing_matches_quadruple_oracle(n):
    for p in set_partitions(n):
        assert is_noncrossing(p) == (not crossing_by_quadruples([set(b) for b in p.blocks]))


def test_kreweras_examples():
    assert kreweras_dual(Partition.bottom(4)) == Partition.top(4)
    assert str(kreweras_dual(P("1,2|3|4"))) == "1|2,3,4"
    assert str(kreweras_dual(kreweras_dual(P("1,2|3|4")))) == "1,4|2|3"
    with pytest.raises(Crossing):
        kreweras_dual(P("1,3|2,4"))


@pytest.mark.parametrize("n", range(1, 7))
def test_kreweras_matches_interleaving_oracle(n):
    for p in build_ncp(n).labels:
        want = kreweras_by_interleaving([set(b) for b in p.blocks], n)
        got = frozenset(frozenset(b) for b in kreweras_dual(p).blocks)
        assert got == want


@pytest.mark.parametrize("n", range(2, 7))
def test_double_dual_is_rotation(n):
    for p in build_ncp(n).labels:
        assert kreweras_dual(kreweras_dual(p)) == rotate(p, -1)


def test_dihedral_group():
    for n in range(1, 7):
        maps = dihedral_group(n)
        assert len(maps) == 2 * n
        perms = {tuple(g(x) for x in range(1, n + 1)) for g in maps}
        # distinct permutations once n >= 3
        assert len(perms) == (2 * n if n >= 3 else n)
    assert str(dihedral_canonical(P("3,5", 6))) == "1,3|2|4|5|6"
    assert dihedral_canonical(Partition.bottom(6)) == Partition.bottom(6)
    assert dihedral_canonical(P("1,2", 6)) == P("1,2", 6)
    assert reflect(P("1,2", 4)) == P("3,4")


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 7).flatmap(random_partition))
def test_dihedral_preserves_noncrossing_and_canonical_is_invariant(p):
    for q in dihedral_images(p):
        assert is_noncrossing(q) == is_noncrossing(p)
        assert dihedral_canonical(q) == dihedral_canonical(p)


def test_embed_examples():
    assert embed_linear(P("1,2|3|4"), GF2) == subspace_from_vectors([(1, 1, 0, 0)], GF2)
    W = embed_linear(P("1,2,3,4|5"))
    assert W.dim == 3 and all(r[4] == 0 for r in W.basis)
    for n in range(2, 6):
        assert embed_linear(Partition.top(n)) == whole(n, QQ)


@pytest.mark.parametrize("n", range(2, 6))
def test_embedding_matches_sympy_oracle(n):
    parts = build_pn(n).labels
    for a in parts:
        assert embed_linear(a).dim == partition_subspace_dim(a.blocks, n) == a.rank
    for a in parts:
        for b in parts:
            assert contains(embed_linear(b), embed_linear(a)) == contained_over_q(a.blocks, b.blocks, n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gf2_embedding_matches_set_oracle(n):
    for p in build_pn(n).labels:
        got = gf2_span(list(embed_linear(p, GF2).basis), n)
        assert got == gf2_partition_space(p.blocks, n)


def test_inverse_examples():
    assert subspace_to_partition(subspace_from_vectors([(1, 1, 0, 0)], GF2)) == P("1,2|3|4")
    W = subspace_from_vectors([(1, 0, 1, 0), (0, 1, 0, 1)], GF2)
    assert subspace_to_partition(W) == P("1,3|2,4")
    assert subspace_to_partition(subspace_from_vectors([(1, -1, 1, -1, 0)], QQ)) is None


@pytest.mark.parametrize("field", [QQ, GF2])
def test_inverse_round_trip(field):
    for p in build_pn(5).labels:
        assert subspace_to_partition(embed_linear(p, field)) == p


def test_universal_examples():
    assert is_universal_vertex(P("1,2,3", 6))
    assert is_universal_vertex(P("6,1,2", 6))
    assert not is_universal_vertex(P("6,1,2", 6), cyclic=False)
    assert not is_universal_vertex(P("2,4", 6))
    assert not is_universal_vertex(Partition.bottom(4))
    assert is_cyclic_arc((5, 6, 1), 6) and not is_cyclic_arc((1, 3), 6)


def test_smallest_block_examples():
    C = [P(s, 6) for s in ["1,2", "1,2|3,4", "1,2,3,4", "1,2,3,4|5,6"]]
    assert smallest_block(C, 1, 6) == (1, 2)
    assert smallest_block(C, 5, 6) == (5, 6)
    assert smallest_block([P("2,4", 6)], 1, 6) == (1, 2, 3, 4, 5, 6)
