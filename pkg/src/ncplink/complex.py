"""The diagonal link of a bounded graded lattice as an abstract simplicial complex.

Faces are chains of elements strictly between bottom and top.  When the
lattice elements are partitions or subspaces, the link also knows how to map
them into the subspace lattice S(V), which is what the failing-modularity
tests and the hull closure work with.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import EmbeddingInvalid, NotAGraph, NotGraded
from .lattice import GradedLattice, maximal_chains
from .linalg import FieldSpec, QQ, Subspace, contains, intersect, sum_
from .partitions import (
    Partition,
    dihedral_group,
    embed_linear,
    is_noncrossing,
    is_universal_face,
    kreweras_dual,
    subspace_to_partition,
)


@dataclass(frozen=True)
class ChainFace:
    chain: tuple[int, ...]
    lattice: GradedLattice = dc_field(compare=False, hash=False, repr=False)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.chain

    @property
    def labels(self) -> list:
        return [self.lattice.labels[i] for i in self.chain]

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(self.lattice.rank[i] for i in self.chain)

    def __len__(self) -> int:
        return len(self.chain)

    def __str__(self) -> str:
        return " < ".join(str(x) for x in self.labels) or "()"


class DiagonalLink:
    """The complex on the open interval (0, 1) of a graded lattice."""

    def __init__(self, lattice: GradedLattice):
        if not lattice.is_graded():
            raise NotGraded("diagonal link needs a graded lattice")
        if lattice.total_rank < 2:
            raise NotGraded("diagonal link needs rank at least 2")
        self.lattice = lattice
        self.rank = lattice.total_rank
        self.vertices = [
            i for i in range(lattice.element_count) if 0 < lattice.rank[i] < self.rank
        ]
        self._chambers: list[ChainFace] | None = None
        self._faces: list[ChainFace] | None = None

    @property
    def dimension(self) -> int:
        return self.rank - 2

    def face(self, elems: Iterable) -> ChainFace:
        """Face from element indices or labels; sorted by rank and validated."""
        L = self.lattice
        idx = [e if isinstance(e, int) else L.index[e] for e in elems]
        idx.sort(key=lambda i: L.rank[i])
        for i in idx:
            if not 0 < L.rank[i] < self.rank:
                raise ValueError(f"{L.labels[i]} is not a vertex of the link")
        for a, b in zip(idx, idx[1:]):
            if not L.lt(a, b):
                raise ValueError(f"{L.labels[a]} and {L.labels[b]} are not a chain")
        return ChainFace(tuple(idx), L)

    @property
    def chambers(self) -> list[ChainFace]:
        if self._chambers is None:
            self._chambers = [
                ChainFace(c[1:-1], self.lattice) for c in maximal_chains(self.lattice)
            ]
        return self._chambers

    @property
    def faces(self) -> list[ChainFace]:
        """All non-empty faces, ordered by size and then by index tuple."""
        if self._faces is None:
            L = self.lattice
            out = []

            def grow(chain: list[int]):
                out.append(ChainFace(tuple(chain), L))
                last = chain[-1]
                for v in self.vertices:
                    if L.rank[v] > L.rank[last] and L.lt(last, v):
                        chain.append(v)
                        grow(chain)
                        chain.pop()

            for v in self.vertices:
                grow([v])
            out.sort(key=lambda f: (len(f.chain), f.chain))
            self._faces = out
        return self._faces

    def __repr__(self) -> str:
        return f"DiagonalLink(vertices={len(self.vertices)}, dimension={self.dimension})"


def diagonal_link(L: GradedLattice) -> DiagonalLink:
    return DiagonalLink(L)


# -- rank bookkeeping -------------------------------------------------------------


def corank(F: ChainFace) -> frozenset[int]:
    """Ranks in 1..r missing from ``F``; r is the lattice rank, so r is always present."""
    r = F.lattice.total_rank
    return frozenset(range(1, r + 1)) - set(F.ranks)


def has_coconsecutive_corank(F: ChainFace) -> bool:
    c = corank(F)
    return any(i in c and i + 1 in c for i in c)


def has_rank3_gap(F: ChainFace) -> bool:
    """Some gap between consecutive members of 0 < F < 1 has rank at least 3.

    Equivalent to two consecutive coranks inside 1..r-1, the convention under
    which the chambers on both sides of F actually differ.
    """
    ranks = [0, *F.ranks, F.lattice.total_rank]
    return any(b - a >= 3 for a, b in zip(ranks, ranks[1:]))


def adjacent_vertices(X: DiagonalLink, F: ChainFace) -> list[int]:
    """Vertices outside ``F`` comparable with every vertex of ``F``."""
    L = X.lattice
    inside = set(F.chain)
    return [
        v
        for v in X.vertices
        if v not in inside and all(L.comparable(v, u) for u in F.chain)
    ]


def adjacent_via_chambers(X: DiagonalLink, F: ChainFace) -> list[int]:
    """Vertices of chambers through ``F``, minus ``F``; agrees with adjacency when pure."""
    inside = set(F.chain)
    seen: set[int] = set()
    for C in X.chambers:
        if inside <= set(C.chain):
            seen.update(C.chain)
    return sorted(seen - inside)


# -- linear embedding ---------------------------------------------------------------


class LinearEmbedding:
    """Maps lattice elements to subspaces and decides membership of subspaces.

    Partition-labelled lattices use the block-sum embedding; subspace-labelled
    lattices embed as themselves; anything else needs an explicit ``image``.
    """

    def __init__(
        self,
        lattice: GradedLattice,
        field: FieldSpec = QQ,
        image: Mapping[int, Subspace] | None = None,
    ):
        self.lattice = lattice
        self.field = field
        first = lattice.labels[0]
        if image is not None:
            self.kind = "explicit"
            self.image = [image[i] for i in range(lattice.element_count)]
        elif isinstance(first, Partition):
            self.kind = "partition"
            self.image = [embed_linear(p, field) for p in lattice.labels]
            self._noncrossing_only = all(is_noncrossing(p) for p in lattice.labels)
        elif isinstance(first, Subspace):
            self.kind = "subspace"
            self.image = list(lattice.labels)
        else:
            raise EmbeddingInvalid("lattice labels are neither partitions nor subspaces")
        self.preimage = {W: i for i, W in enumerate(self.image)}
        self._fails: dict[tuple[int, int], bool] = {}

    def check_order(self) -> None:
        """Raise EmbeddingInvalid unless x <= y exactly when f(x) is inside f(y)."""
        L = self.lattice
        if len(self.preimage) != L.element_count:
            raise EmbeddingInvalid("embedding is not injective")
        for a in range(L.element_count):
            for b in range(L.element_count):
                if L.leq(a, b) != contains(self.image[b], self.image[a]):
                    raise EmbeddingInvalid(
                        f"order mismatch at {L.labels[a]!r}, {L.labels[b]!r}"
                    )

    def member(self, W: Subspace) -> bool:
        if self.kind == "partition":
            p = subspace_to_partition(W)
            if p is None:
                return False
            if self._noncrossing_only:
                return is_noncrossing(p)
            return p in self.lattice.index
        return W in self.preimage

    def fails(self, x: int, y: int) -> bool:
        key = (x, y) if x <= y else (y, x)
        hit = self._fails.get(key)
        if hit is None:
            if self.lattice.comparable(x, y):
                hit = False
            else:
                a, b = self.image[x], self.image[y]
                hit = not (self.member(sum_(a, b)) and self.member(intersect(a, b)))
            self._fails[key] = hit
        return hit


_EMBEDDINGS: dict[tuple[int, FieldSpec], LinearEmbedding] = {}


def embedding_for(X: DiagonalLink, field: FieldSpec = QQ) -> LinearEmbedding:
    key = (id(X.lattice), field)
    emb = _EMBEDDINGS.get(key)
    if emb is None or emb.lattice is not X.lattice:
        emb = LinearEmbedding(X.lattice, field)
        _EMBEDDINGS[key] = emb
    return emb


def fails_modularity(x: int, y: int, X: DiagonalLink, field: FieldSpec = QQ) -> bool:
    """Sum or intersection of the two images leaves the embedded poset."""
    return embedding_for(X, field).fails(x, y)


def failing_pairs_around(
    X: DiagonalLink, F: ChainFace, field: FieldSpec = QQ, via_chambers: bool = False
) -> list[tuple[int, int]]:
    emb = embedding_for(X, field)
    adj = adjacent_via_chambers(X, F) if via_chambers else adjacent_vertices(X, F)
    return [(a, b) for a, b in combinations(adj, 2) if emb.fails(a, b)]


def turning_candidates(
    X: DiagonalLink, field: FieldSpec = QQ, faces: Sequence[ChainFace] | None = None
) -> list[ChainFace]:
    """Faces with two consecutive coranks and an adjacent failing pair."""
    emb = embedding_for(X, field)
    out = []
    for F in X.faces if faces is None else faces:
        if not has_coconsecutive_corank(F):
            continue
        adj = adjacent_vertices(X, F)
        if any(emb.fails(a, b) for a, b in combinations(adj, 2)):
            out.append(F)
    out.sort(key=lambda f: (len(f.chain), f.chain))
    return out


def simplicial_hull(
    X: DiagonalLink, F: ChainFace, G: ChainFace, field: FieldSpec = QQ
) -> set[Subspace]:
    """Closure of the vertex images of F and G under sum and intersection.

    The zero subspace and V are dropped; they are not vertices of the building.
    """
    emb = embedding_for(X, field)
    n = emb.image[0].ambient_n
    found = {emb.image[v] for v in F.chain + G.chain}
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                for W in (sum_(a, b), intersect(a, b)):
                    if 0 < W.dim < n - 1 and W not in found:
                        found.add(W)
                        new.append(W)
        frontier = new
    return found


# -- symmetry on partition faces -------------------------------------------------------


def face_labels(F: ChainFace) -> tuple[Partition, ...]:
    return tuple(F.labels)


def face_key(parts: Sequence[Partition]) -> tuple[str, ...]:
    return tuple(str(p) for p in parts)


def dihedral_face_canonical(parts: Sequence[Partition]) -> tuple[Partition, ...]:
    """Least image of a chain of partitions under the dihedral group."""
    n = parts[0].n
    images = [tuple(p.map(g) for p in parts) for g in dihedral_group(n)]
    return min(images, key=face_key)


def dual_face(parts: Sequence[Partition]) -> tuple[Partition, ...]:
    """Kreweras duality reverses a chain; the result is again sorted by rank."""
    return tuple(sorted((kreweras_dual(p) for p in parts), key=lambda p: p.rank))


def is_universal_chainface(F: ChainFace, cyclic: bool = True) -> bool:
    return is_universal_face(F.labels, cyclic)


# -- graphs ------------------------------------------------------------------------------


def link_graph(X: DiagonalLink) -> dict[Hashable, set[Hashable]]:
    if X.dimension != 1:
        raise NotAGraph(f"link has dimension {X.dimension}, not 1")
    L = X.lattice
    adj: dict[Hashable, set[Hashable]] = {L.labels[v]: set() for v in X.vertices}
    for C in X.chambers:
        a, b = (L.labels[i] for i in C.chain)
        adj[a].add(b)
        adj[b].add(a)
    return adj


def parse_edge_file(text: str) -> dict[str, set[str]]:
    """One ``u v`` edge per line; ``#`` starts a comment."""
    adj: dict[str, set[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise NotAGraph(f"line {lineno}: expected 'u v', got {raw!r}")
        u, v = parts
        if u == v:
            raise NotAGraph(f"line {lineno}: loop at {u}")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def girth_of(adj: Mapping[Hashable, Iterable[Hashable]]) -> int | None:
    """Length of a shortest cycle by BFS from every vertex; None if acyclic."""
    best = None
    for s in adj:
        dist = {s: 0}
        parent = {s: None}
        q = deque([s])
        while q:
            u = q.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    cyc = dist[u] + dist[w] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


def shortest_cycle(adj: Mapping[Hashable, Iterable[Hashable]]) -> list | None:
    """Vertices of one shortest cycle, in cyclic order; the least start vertex wins ties."""
    best = None
    for s in sorted(adj, key=str):
        dist = {s: 0}
        parent = {s: None}
        q = deque([s])
        while q:
            u = q.popleft()
            for w in sorted(adj[u], key=str):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    cyc = dist[u] + dist[w] + 1
                    if best is None or cyc < len(best):
                        a, b = [u], [w]
                        while parent[a[-1]] is not None:
                            a.append(parent[a[-1]])
                        while parent[b[-1]] is not None:
                            b.append(parent[b[-1]])
                        # the two tree paths meet at s only when they share no other vertex
                        if not set(a[:-1]) & set(b[:-1]):
                            best = a[::-1] + b[:-1]
    return best


def graph_girth(X: DiagonalLink | Mapping) -> tuple[int | None, float | None]:
    """Combinatorial girth and its length at pi/3 per edge."""
    adj = link_graph(X) if isinstance(X, DiagonalLink) else X
    g = girth_of(adj)
    return g, (None if g is None else g * math.pi / 3)
