"""Set partitions of {1..n}, non-crossing partitions and their lattices.

The canonical text form is ``"1,2|3|4"``: blocks ordered by their minimum,
elements ascending.  The points 1..n sit in cyclic order on a circle; all
crossing tests are combinatorial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .errors import Crossing, InvalidPartition, TooLarge
from .lattice import GradedLattice
from .linalg import FieldSpec, Subspace, QQ, _make

MAX_N = 8


@dataclass(frozen=True, order=False)
class Partition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: list[int] = []
        for b in self.blocks:
            if not b:
                raise InvalidPartition("empty block")
            seen.extend(b)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise InvalidPartition(f"blocks {self.blocks} do not partition 1..{self.n}")
        canon = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int) -> "Partition":
        """Build from the non-trivial blocks; unlisted points become singletons."""
        blocks = [tuple(b) for b in blocks]
        used = {x for b in blocks for x in b}
        if len(used) != sum(len(b) for b in blocks):
            raise InvalidPartition(f"overlapping blocks {blocks}")
        if any(x < 1 or x > n for x in used):
            raise InvalidPartition(f"element outside 1..{n} in {blocks}")
        blocks += [(x,) for x in range(1, n + 1) if x not in used]
        return cls(n, tuple(blocks))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Partition":
        """Parse ``"1,2|3|4"``.  With ``n`` given, missing points become singletons."""
        text = text.strip().strip('"')
        try:
            blocks = [tuple(int(x) for x in part.split(",")) for part in text.split("|")]
        except ValueError:
            raise InvalidPartition(f"cannot parse partition {text!r}") from None
        if n is None:
            n = max(max(b) for b in blocks)
        return cls.from_blocks(blocks, n)

    @classmethod
    def bottom(cls, n: int) -> "Partition":
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def top(cls, n: int) -> "Partition":
        return cls(n, (tuple(range(1, n + 1)),))

    def __str__(self) -> str:
        return "|".join(",".join(map(str, b)) for b in self.blocks)

    def __repr__(self) -> str:
        return f"Partition({self})"

    @property
    def rank(self) -> int:
        return self.n - len(self.blocks)

    @cached_property
    def block_of(self) -> dict[int, tuple[int, ...]]:
        return {x: b for b in self.blocks for x in b}

    @property
    def nontrivial_blocks(self) -> list[tuple[int, ...]]:
        return [b for b in self.blocks if len(b) > 1]

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` lies in a block of ``other``."""
        ob = other.block_of
        return all(set(b) <= set(ob[b[0]]) for b in self.blocks)

    def map(self, g) -> "Partition":
        return Partition(self.n, tuple(tuple(g(x) for x in b) for b in self.blocks))


def chords_interleave(a: int, c: int, b: int, d: int) -> bool:
    """Chords {a,c} and {b,d} on a circle cross strictly (no shared endpoint)."""
    if len({a, b, c, d}) < 4:
        return False
    lo, hi = min(a, c), max(a, c)
    return (lo < b < hi) != (lo < d < hi)


def blocks_cross(x: Sequence[int], y: Sequence[int]) -> bool:
    for a, c in combinations(x, 2):
        for b, d in combinations(y, 2):
            if chords_interleave(a, c, b, d):
                return True
    # a two-point block against a one-point block never crosses; nothing else to test
    return False


def is_noncrossing(p: Partition) -> bool:
    big = p.nontrivial_blocks
    return not any(blocks_cross(x, y) for x, y in combinations(big, 2))


def set_partitions(n: int) -> Iterable[Partition]:
    """All partitions of {1..n} via restricted growth strings."""

    def grow(i: int, labels: list[int], m: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(m)]
            for x, lab in enumerate(labels, 1):
                blocks[lab].append(x)
            yield Partition(n, tuple(tuple(b) for b in blocks))
            return
        for lab in range(m + 1):
            labels.append(lab)
            yield from grow(i + 1, labels, max(m, lab + 1))
            labels.pop()

    if n == 0:
        return
    yield from grow(0, [], 0)


def _sort_key(p: Partition):
    return (p.rank, str(p))


def _partition_lattice(parts: list[Partition]) -> GradedLattice:
    parts = sorted(parts, key=_sort_key)
    up = []
    for i, p in enumerate(parts):
        mask = 0
        for j, q in enumerate(parts):
            if q.rank >= p.rank and p.refines(q):
                mask |= 1 << j
        up.append(mask)
    return GradedLattice(parts, up)


def _guard(n: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_N:
        raise TooLarge(f"n={n} exceeds the resource guard of {MAX_N}")


@lru_cache(maxsize=None)
def build_pn(n: int) -> GradedLattice:
    """The full partition lattice P_n ordered by refinement."""
    _guard(n)
    return _partition_lattice(list(set_partitions(n)))


@lru_cache(maxsize=None)
def build_ncp(n: int) -> GradedLattice:
    """The non-crossing partition lattice NCP_n; elements sorted by (rank, string)."""
    _guard(n)
    return _partition_lattice([p for p in set_partitions(n) if is_noncrossing(p)])


def _in_arc(x: int, i: int, j: int, n: int) -> bool:
    """``x`` lies in the cyclic arc i+1, ..., j."""
    return 0 < (x - i) % n <= (j - i) % n


def kreweras_dual(p: Partition) -> Partition:
    """Kreweras complement, with the midpoint after point i relabelled as i.

    Midpoints i and j share a block when the chord between them misses every
    block hull, i.e. every block sits on one side of the cut {i+1..j}.
    Applying the map twice rotates by one step: i -> i-1.
    """
    if not is_noncrossing(p):
        raise Crossing(f"{p} is crossing")
    n = p.n
    big = p.nontrivial_blocks

    def linked(i: int, j: int) -> bool:
        for b in big:
            inside = [_in_arc(x, i, j, n) for x in b]
            if any(inside) and not all(inside):
                return False
        return True

    label = list(range(n + 1))
    for j in range(2, n + 1):
        for i in range(1, j):
            if linked(i, j):
                label[j] = label[i]
                break
    groups: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(label[x], []).append(x)
    return Partition(n, tuple(tuple(g) for g in groups.values()))


def rotate(p: Partition, k: int = 1) -> Partition:
    n = p.n
    return p.map(lambda x: (x - 1 + k) % n + 1)


def reflect(p: Partition) -> Partition:
    """i -> n + 1 - i."""
    n = p.n
    return p.map(lambda x: n + 1 - x)


def dihedral_group(n: int) -> list:
    """The 2n maps of {1..n}: rotations, then reflections composed with rotations."""
    maps = []
    for s in (1, -1):
        for k in range(n):
            maps.append(lambda x, s=s, k=k: (s * (x - 1) + k) % n + 1)
    return maps


def dihedral_images(p: Partition) -> list[Partition]:
    return [p.map(g) for g in dihedral_group(p.n)]


def dihedral_canonical(p: Partition) -> Partition:
    """The image with the lexicographically least string form."""
    return min(dihedral_images(p), key=str)


@lru_cache(maxsize=None)
def embed_linear(p: Partition, field: FieldSpec = QQ) -> Subspace:
    """Subspace of V cut out by ``sum(y_i for i in Q) == 0`` for each block Q."""
    n = p.n
    rows = []
    for b in p.blocks:
        for x in b[1:]:
            r = [0] * n
            r[b[0] - 1], r[x - 1] = 1, -1
            rows.append(r)
    return _make(n, field, rows)


def difference_vector(n: int, i: int, j: int) -> list[int]:
    v = [0] * n
    v[i - 1], v[j - 1] = 1, -1
    return v


def subspace_to_partition(W: Subspace) -> Partition | None:
    """Recover the partition whose image is ``W``, or None if there is none."""
    n = W.ambient_n
    label = list(range(n + 1))
    for i in range(1, n + 1):
        if label[i] != i:
            continue
        for j in range(i + 1, n + 1):
            if label[j] == j and W.contains_vector(difference_vector(n, i, j)):
                label[j] = i
    groups: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(label[x], []).append(x)
    cand = Partition(n, tuple(tuple(g) for g in groups.values()))
    return cand if embed_linear(cand, W.field) == W else None


def is_cyclic_arc(block: Sequence[int], n: int, cyclic: bool = True) -> bool:
    s = sorted(block)
    if s == list(range(s[0], s[0] + len(s))):
        return True
    if not cyclic:
        return False
    # wraps past n: the complement is a linear run strictly inside 2..n-1
    rest = [x for x in range(1, n + 1) if x not in set(s)]
    return rest == list(range(rest[0], rest[0] + len(rest))) and 1 in s and n in s


def is_universal_vertex(p: Partition, cyclic: bool = True) -> bool:
    """Exactly one non-singleton block and it is a run of consecutive points."""
    big = p.nontrivial_blocks
    return len(big) == 1 and is_cyclic_arc(big[0], p.n, cyclic)


def is_universal_face(vertices: Iterable[Partition], cyclic: bool = True) -> bool:
    return all(is_universal_vertex(v, cyclic) for v in vertices)


def smallest_block(vertices: Iterable[Partition], i: int, n: int) -> tuple[int, ...]:
    """Smallest block of a face vertex containing ``i`` and something else.

    Falls back to the whole of 1..n when ``i`` is a singleton everywhere.
    """
    best = tuple(range(1, n + 1))
    for v in vertices:
        b = v.block_of[i]
        if 1 < len(b) < len(best):
            best = b
    return best
