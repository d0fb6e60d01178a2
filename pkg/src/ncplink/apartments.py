"""Non-crossing trees on the n-gon and the apartments they span.

A spanning tree with chords e_1..e_{n-1} gives the basis e_a - e_b of V; the
apartment's vertices are the component partitions of its proper non-empty
subforests.  The constructive searches below follow the greedy edge choices
of the existence proofs inside a full backtracking search, so a failure is a
genuine counterexample rather than an unlucky tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import (
    Crossing,
    Cyclic,
    DegenerateSubset,
    InvalidPartition,
    NoApartment,
    NoPair,
    PreconditionFailed,
    TooLarge,
)
from .linalg import FieldSpec, QQ, are_complementary
from .partitions import Partition, embed_linear, is_universal_vertex, smallest_block

Chord = tuple[int, int]


def _chord(a: int, b: int) -> Chord:
    return (a, b) if a < b else (b, a)


def chords_cross(e1: Iterable[int], e2: Iterable[int], n: int | None = None) -> bool:
    """Endpoints strictly interleave around the circle; shared endpoints never cross."""
    a, c = sorted(e1)
    b, d = sorted(e2)
    if len({a, b, c, d}) < 4:
        return False
    return (a < b < c) != (a < d < c)


def _components(edges: Iterable[Chord], n: int) -> list[int]:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            raise Cyclic(f"edge {a}-{b} closes a cycle")
        parent[max(ra, rb)] = min(ra, rb)
    return [find(x) for x in range(n + 1)]


def _partition_of(edges: Iterable[Chord], n: int) -> Partition:
    comp = _components(edges, n)
    groups: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(comp[x], []).append(x)
    return Partition(n, tuple(tuple(g) for g in groups.values()))


def forest_to_partition(edges: Iterable[Iterable[int]], n: int) -> Partition:
    """Connected components of a non-crossing forest on 1..n."""
    edges = [_chord(*e) for e in edges]
    for e, f in combinations(edges, 2):
        if chords_cross(e, f):
            raise Crossing(f"chords {e} and {f} cross")
    return _partition_of(edges, n)


@dataclass(frozen=True)
class NcTree:
    n: int
    edges: tuple[Chord, ...]

    def __post_init__(self):
        edges = tuple(sorted(_chord(*e) for e in self.edges))
        object.__setattr__(self, "edges", edges)
        if len(edges) != self.n - 1:
            raise InvalidPartition(f"a spanning tree on {self.n} points has {self.n - 1} edges")
        for e in edges:
            if not (1 <= e[0] < e[1] <= self.n):
                raise InvalidPartition(f"bad edge {e}")
        forest_to_partition(edges, self.n)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "NcTree":
        """Parse ``"1-2,2-3,3-4"``."""
        try:
            edges = [tuple(int(x) for x in part.split("-")) for part in text.split(",")]
        except ValueError:
            raise InvalidPartition(f"cannot parse tree {text!r}") from None
        if any(len(e) != 2 for e in edges):
            raise InvalidPartition(f"cannot parse tree {text!r}")
        if n is None:
            n = max(max(e) for e in edges)
        return cls(n, tuple(edges))

    def __str__(self) -> str:
        return ",".join(f"{a}-{b}" for a, b in self.edges)

    def degree(self, x: int) -> int:
        return sum(x in e for e in self.edges)


@dataclass(frozen=True)
class Apartment:
    """Vertices map each induced partition to its edge-index subset (1-based)."""

    tree: NcTree
    vertices: dict = dc_field(compare=False, hash=False)

    @property
    def n(self) -> int:
        return self.tree.n

    def __contains__(self, p: Partition) -> bool:
        return p in self.vertices


def subforest_partitions(edges: Sequence[Chord], n: int) -> dict[Partition, frozenset[int]]:
    """Partition of every proper non-empty edge subset; no crossing check."""
    out: dict[Partition, frozenset[int]] = {}
    m = len(edges)
    for mask in range(1, (1 << m) - 1):
        S = frozenset(k + 1 for k in range(m) if (mask >> k) & 1)
        p = _partition_of([edges[k - 1] for k in S], n)
        out[p] = S
    return out


@lru_cache(maxsize=None)
def apartment_from_tree(T: NcTree) -> Apartment:
    return Apartment(T, subforest_partitions(T.edges, T.n))


def all_spanning_trees(n: int) -> list[tuple[Chord, ...]]:
    """The n^(n-2) labelled trees on 1..n, decoded from Pruefer sequences."""
    if n == 1:
        return [()]
    if n == 2:
        return [((1, 2),)]
    out = []
    for seq in product(range(1, n + 1), repeat=n - 2):
        degree = [1] * (n + 1)
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = next(v for v in range(1, n + 1) if degree[v] == 1)
            edges.append(_chord(leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = (v for v in range(1, n + 1) if degree[v] == 1)
        edges.append(_chord(u, w))
        out.append(tuple(sorted(edges)))
    return out


@lru_cache(maxsize=None)
def enumerate_nc_trees(n: int) -> tuple[NcTree, ...]:
    """All non-crossing spanning trees, sorted by edge list."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > 7:
        raise TooLarge(f"n={n} exceeds the tree enumeration guard of 7")
    chords = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    out = []

    def extend(start: int, chosen: list[Chord]):
        if len(chosen) == n - 1:
            out.append(NcTree(n, tuple(chosen)))
            return
        for k in range(start, len(chords)):
            e = chords[k]
            if any(chords_cross(e, f) for f in chosen):
                continue
            try:
                _components(chosen + [e], n)
            except Cyclic:
                continue
            chosen.append(e)
            extend(k + 1, chosen)
            chosen.pop()

    extend(0, [])
    return tuple(sorted(out, key=lambda t: t.edges))


@lru_cache(maxsize=None)
def nc_apartments(n: int) -> tuple[Apartment, ...]:
    return tuple(apartment_from_tree(T) for T in enumerate_nc_trees(n))


def apartment_contains(A: Apartment, face: Iterable[Partition]) -> bool:
    return all(p in A.vertices for p in face)


def is_dominant(v: Partition, face: Sequence[Partition]) -> bool:
    """Every non-crossing apartment through ``v`` contains the whole face."""
    if v not in face:
        raise PreconditionFailed(f"{v} is not a vertex of the face")
    return all(apartment_contains(A, face) for A in nc_apartments(v.n) if v in A.vertices)


def dominant_vertices(face: Sequence[Partition]) -> list[Partition]:
    return [v for v in face if is_dominant(v, face)]


@lru_cache(maxsize=None)
def are_opposite(v: Partition, w: Partition, field: FieldSpec = QQ) -> bool:
    return are_complementary(embed_linear(v, field), embed_linear(w, field))


# -- constructive apartments -----------------------------------------------------------


def _merge_step(prev: Partition, nxt: Partition) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two blocks of ``prev`` that are joined in ``nxt``."""
    merged = [b for b in prev.blocks if nxt.block_of[b[0]] != b]
    if len(merged) != 2:
        raise PreconditionFailed(f"{nxt} does not cover {prev}")
    return merged[0], merged[1]


def _full_chain(chamber: Sequence[Partition]) -> list[Partition]:
    n = chamber[0].n
    chain = list(chamber)
    if len(chain) != n - 2 or [p.rank for p in chain] != list(range(1, n - 1)):
        raise PreconditionFailed("expected a chamber with one vertex in each rank 1..n-2")
    for a, b in zip(chain, chain[1:]):
        if not a.refines(b):
            raise PreconditionFailed(f"{a} does not refine {b}")
    return chain + [Partition.top(n)]


def _universal_orders(C: Sequence[Partition]) -> list[list[int]]:
    """The two total orders on 1..n read off a universal chamber."""
    chain = _full_chain(C)
    first = chain[0].nontrivial_blocks[0]
    tail: list[int] = []
    prev = set(first)
    for p in chain[1:]:
        big = max(p.blocks, key=len)
        new = set(big) - prev
        if len(new) != 1:
            raise PreconditionFailed("chamber is not universal")
        tail.extend(new)
        prev = set(big)
    a, b = first
    return [[a, b] + tail, [b, a] + tail]


@dataclass
class SearchStats:
    """Work counters; deterministic because cached searches replay their counts."""

    nodes: int = 0
    backtracks: int = 0
    order_switches: int = 0

    def add(self, nodes: int, backtracks: int, switches: int = 0) -> None:
        self.nodes += nodes
        self.backtracks += backtracks
        self.order_switches += switches


def star_apartment(
    C: Sequence[Partition], C2: Sequence[Partition], stats: SearchStats | None = None
) -> Apartment:
    """Apartment containing the universal chamber ``C`` and the chamber ``C2``.

    Builds forests T_1 < ... < T_{n-1} following C2: each step joins the two
    merging blocks by an edge from the later of their two minima (in the order
    read off C) down to an earlier vertex of the other block.
    """
    if not all(is_universal_vertex(p) for p in C):
        raise PreconditionFailed("first chamber must be universal")
    found, nodes, backtracks, switches = _star_search(tuple(C), tuple(C2))
    if stats is not None:
        stats.add(nodes, backtracks, switches)
    if found is None:
        raise NoApartment(f"no apartment through {list(map(str, C))} and {list(map(str, C2))}")
    return found


@lru_cache(maxsize=None)
def _star_search(C: tuple, C2: tuple):
    n = C[0].n
    target = _full_chain(C2)
    counter = SearchStats()
    for k, order in enumerate(_universal_orders(C)):
        counter.order_switches = k
        pos = {x: r for r, x in enumerate(order)}
        steps = []
        for prev, nxt in zip(target, target[1:]):
            b1, b2 = _merge_step(prev, nxt)
            m1 = min(b1, key=pos.get)
            m2 = min(b2, key=pos.get)
            v, other = (m1, b2) if pos[m1] > pos[m2] else (m2, b1)
            ws = sorted((w for w in other if pos[w] < pos[v]), key=pos.get, reverse=True)
            steps.append([_chord(v, w) for w in ws])
        first = [_chord(*target[0].nontrivial_blocks[0])]
        found = _search([first] + steps, n, lambda edges: _check(edges, n, C, C2), counter)
        if found is not None:
            break
    return found, counter.nodes, counter.backtracks, counter.order_switches


def tree_induces(edges: Sequence[Chord], p: Partition) -> bool:
    """Some subforest of the tree has components ``p``: the edges inside p's blocks."""
    inside = [(a, b) for a, b in edges if p.block_of[a] is p.block_of[b]]
    return _partition_of(inside, p.n) == p


def _check(edges, n, *faces) -> Apartment | None:
    if all(tree_induces(edges, p) for f in faces for p in f):
        return apartment_from_tree(NcTree(n, tuple(edges)))
    return None


def _search(options: list[list[Chord]], n: int, accept, stats: SearchStats):
    """Depth-first choice of one chord per step; chords must not cross."""
    chosen: list[Chord] = []

    def go(k: int):
        stats.nodes += 1
        if k == len(options):
            return accept(chosen)
        for e in options[k]:
            if any(chords_cross(e, f) for f in chosen):
                continue
            chosen.append(e)
            hit = go(k + 1)
            if hit is not None:
                return hit
            chosen.pop()
            stats.backtracks += 1
        return None

    return go(0)


def consecutive(i: int, j: int, n: int) -> bool:
    return (i - j) % n in (1, n - 1)


def leaf_apartment(
    C: Sequence[Partition], i: int, j: int, stats: SearchStats | None = None
) -> tuple[Apartment, Partition, Partition]:
    """Apartment containing C, the boundary edge {i,j} and its opposite {i}|rest.

    Requires j in the smallest block of C properly containing i.  The tree puts
    the chord i-j at the first rank where i stops being a singleton and never
    touches i again, so i ends up a leaf.
    """
    n = C[0].n
    if not consecutive(i, j, n):
        raise PreconditionFailed(f"{i} and {j} are not consecutive")
    if j not in smallest_block(C, i, n):
        raise PreconditionFailed(f"{j} is not in the block C_{i}")
    found, v, w, nodes, backtracks = _leaf_search(tuple(C), i, j)
    if stats is not None:
        stats.add(nodes, backtracks)
    if found is None:
        raise NoApartment(f"no leaf apartment for {list(map(str, C))}, i={i}, j={j}")
    return found, v, w


@lru_cache(maxsize=None)
def _leaf_search(C: tuple, i: int, j: int):
    n = C[0].n
    chain = _full_chain(C)
    e = _chord(i, j)
    # first rank at which i leaves its singleton block
    k = next(l for l, p in enumerate(chain) if len(p.block_of[i]) > 1)
    options: list[list[Chord]] = []
    prev = Partition.bottom(n)
    for l, p in enumerate(chain):
        b1, b2 = _merge_step(prev, p)
        if l == k:
            options.append([e])
        else:
            opts = sorted(_chord(a, b) for a in b1 for b in b2)
            if l > k:
                opts = [c for c in opts if i not in c]
            options.append(opts)
        prev = p
    v = Partition.from_blocks([e], n)
    w = Partition(n, ((i,), tuple(x for x in range(1, n + 1) if x != i)))
    counter = SearchStats()
    found = _search(options, n, lambda edges: _check(edges, n, C, [v, w]), counter)
    return found, v, w, counter.nodes, counter.backtracks


@dataclass
class ShortcutResult:
    i: int
    j: int
    v: Partition
    w: Partition
    face_apartment: Apartment
    chamber_apartment: Apartment


def shortcut_indices(C: Sequence[Partition], u: Partition) -> tuple[int, int]:
    """First consecutive (i, j), by i then j = i+1 before i-1, with j in C_i and u_i."""
    n = u.n
    for i in range(1, n + 1):
        for j in (i % n + 1, (i - 2) % n + 1):
            if j in smallest_block(C, i, n) and j in smallest_block([u], i, n):
                return i, j
    raise NoPair(f"no consecutive i, j with j in C_i and u_i for u={u}")


def shortcut_pair(
    face: Sequence[Partition],
    C: Sequence[Partition],
    u: Partition,
    stats: SearchStats | None = None,
) -> ShortcutResult:
    """Opposite universal vertices v, w sharing an apartment with ``face`` and with ``C``.

    ``u`` is the dominant vertex of ``face``.  The face-side apartment comes
    from the leaf construction on a chamber through ``u`` whose block at i
    contains j; dominance of ``u`` is what puts the rest of the face in it.
    """
    i, j = shortcut_indices(C, u)
    A2, v, w = leaf_apartment(C, i, j, stats)
    A1 = _face_apartment(tuple(face), u, i, j)
    if A1 is None:
        raise NoApartment(f"no apartment through {list(map(str, face))}, {v}, {w}")
    if not (apartment_contains(A2, [*C, v, w]) and apartment_contains(A1, [*face, v, w])):
        raise NoApartment("constructed apartments miss a required vertex")
    return ShortcutResult(i, j, v, w, A1, A2)


@lru_cache(maxsize=None)
def chambers_of(n: int) -> tuple[tuple[Partition, ...], ...]:
    """All chambers of the NCP_n link as rank-ordered partition tuples."""
    from .lattice import maximal_chains
    from .partitions import build_ncp

    L = build_ncp(n)
    return tuple(tuple(L.labels[k] for k in c[1:-1]) for c in maximal_chains(L))


@lru_cache(maxsize=None)
def _face_apartment(face: tuple, u: Partition, i: int, j: int) -> Apartment | None:
    n = u.n
    through_u = [c for c in chambers_of(n) if u in c]
    # chambers containing the whole face first
    through_u.sort(key=lambda c: not all(p in c for p in face))
    for C1 in through_u:
        if j not in smallest_block(C1, i, n):
            continue
        A1, _, _ = leaf_apartment(C1, i, j)
        if apartment_contains(A1, face):
            return A1
    return None


# -- metric realisation --------------------------------------------------------------


@dataclass(frozen=True)
class ExactCosine:
    """cos = num / sqrt(den2) with rational num and positive rational den2."""

    num: Fraction
    den2: Fraction

    def equals(self, q) -> bool:
        q = Fraction(q)
        if (self.num > 0) != (q > 0) or (self.num == 0) != (q == 0):
            return False
        return self.num * self.num == q * q * self.den2

    def __neg__(self) -> "ExactCosine":
        return ExactCosine(-self.num, self.den2)

    def __float__(self) -> float:
        return float(self.num) / math.sqrt(self.den2)

    def angle(self) -> float:
        return math.acos(max(-1.0, min(1.0, float(self))))


@dataclass(frozen=True)
class ApartmentPoint:
    """Rational direction in the zero-mean hyperplane of Q^(n-1); unit after scaling."""

    coordinates: tuple[Fraction, ...]

    @property
    def unit(self) -> tuple[float, ...]:
        norm = math.sqrt(sum(x * x for x in self.coordinates))
        return tuple(float(x) / norm for x in self.coordinates)


def vertex_coords(S: Iterable[int], n: int) -> ApartmentPoint:
    """Indicator of S minus its mean, for S a proper non-empty subset of 1..n-1."""
    m = n - 1
    S = set(S)
    if not S or len(S) >= m or not S <= set(range(1, m + 1)):
        raise DegenerateSubset(f"{sorted(S)} is not a proper non-empty subset of 1..{m}")
    mean = Fraction(len(S), m)
    return ApartmentPoint(tuple((1 if k in S else 0) - mean for k in range(1, m + 1)))


def combine(points: Sequence[ApartmentPoint], weights: Sequence) -> ApartmentPoint:
    """Non-negative combination of vertex directions; a point of their simplex."""
    if any(Fraction(w) < 0 for w in weights) or not any(weights):
        raise ValueError("weights must be non-negative and not all zero")
    m = len(points[0].coordinates)
    return ApartmentPoint(
        tuple(sum(Fraction(w) * p.coordinates[k] for p, w in zip(points, weights)) for k in range(m))
    )


def cosine(P1: ApartmentPoint, P2: ApartmentPoint) -> ExactCosine:
    dot = sum(a * b for a, b in zip(P1.coordinates, P2.coordinates))
    n1 = sum(a * a for a in P1.coordinates)
    n2 = sum(b * b for b in P2.coordinates)
    return ExactCosine(Fraction(dot), Fraction(n1 * n2))


def apartment_distance(A: Apartment | None, P1: ApartmentPoint, P2: ApartmentPoint) -> float:
    """Spherical distance in radians."""
    if A is not None and len(P1.coordinates) != A.n - 1:
        raise DegenerateSubset("point does not live in this apartment")
    return cosine(P1, P2).angle()
