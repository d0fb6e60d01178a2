"""Finite bounded posets and lattices stored as up/down bitmasks.

Elements are addressed by index; ``labels[i]`` is the user-facing identifier.
Join and meet are brute-force bound scans, which is plenty for the few
hundred elements this package ever builds.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .errors import NotALattice, NotAPoset, NotBounded, NotComparable


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GradedLattice:
    """A validated finite bounded poset; ranks are filled in when it is graded.

    The name follows the common case; ``is_lattice`` and ``is_graded`` report
    whether the structure actually deserves it.
    """

    def __init__(self, labels: Sequence[Hashable], up: Sequence[int]):
        self.labels = tuple(labels)
        self.element_count = len(self.labels)
        self.up = tuple(up)
        down = [0] * self.element_count
        for a, mask in enumerate(self.up):
            for b in _bits(mask):
                down[b] |= 1 << a
        self.down = tuple(down)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != self.element_count:
            raise NotAPoset("duplicate labels")
        self._check_order()
        full = (1 << self.element_count) - 1
        mins = [i for i in range(self.element_count) if self.up[i] == full]
        maxs = [i for i in range(self.element_count) if self.down[i] == full]
        if len(mins) != 1 or len(maxs) != 1:
            raise NotBounded("poset has no unique minimum and maximum")
        self.bottom_index = mins[0]
        self.top_index = maxs[0]
        self._covers_up = self._compute_covers()
        self.rank = self._compute_rank()
        self._join: dict[tuple[int, int], int] = {}
        self._meet: dict[tuple[int, int], int] = {}

    # -- construction helpers ------------------------------------------------

    def _check_order(self) -> None:
        for a, mask in enumerate(self.up):
            if not (mask >> a) & 1:
                raise NotAPoset(f"not reflexive at {self.labels[a]!r}")
            for b in _bits(mask):
                if b != a and (self.up[b] >> a) & 1:
                    raise NotAPoset(
                        f"not antisymmetric: {self.labels[a]!r}, {self.labels[b]!r}"
                    )
                if self.up[b] & ~mask:
                    raise NotAPoset(f"not transitive through {self.labels[b]!r}")

    def _compute_covers(self) -> tuple[tuple[int, ...], ...]:
        covers = []
        for a in range(self.element_count):
            above = self.up[a] & ~(1 << a)
            row = [b for b in _bits(above) if (self.up[a] & self.down[b]) == (1 << a) | (1 << b)]
            covers.append(tuple(row))
        return tuple(covers)

    def _compute_rank(self) -> tuple[int, ...] | None:
        # popcount of the down-set is a linear extension
        order = sorted(range(self.element_count), key=lambda i: self.down[i].bit_count())
        height = [0] * self.element_count
        for a in order:
            for b in self._covers_up[a]:
                height[b] = max(height[b], height[a] + 1)
        for a in range(self.element_count):
            for b in self._covers_up[a]:
                if height[b] != height[a] + 1:
                    return None
        return tuple(height)

    # -- basic queries ---------------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool((self.up[a] >> b) & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a: int, b: int) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def covers(self, a: int) -> tuple[int, ...]:
        """Indices covering ``a``."""
        return self._covers_up[a]

    @property
    def bottom(self) -> int:
        return self.bottom_index

    @property
    def top(self) -> int:
        return self.top_index

    @property
    def total_rank(self) -> int:
        if self.rank is None:
            raise NotALattice("poset is not graded")
        return self.rank[self.top_index]

    def is_graded(self) -> bool:
        return self.rank is not None

    def elements_of_rank(self, r: int) -> list[int]:
        return [i for i in range(self.element_count) if self.rank and self.rank[i] == r]

    def upper_bounds(self, a: int, b: int) -> list[int]:
        return list(_bits(self.up[a] & self.up[b]))

    def lower_bounds(self, a: int, b: int) -> list[int]:
        return list(_bits(self.down[a] & self.down[b]))

    # -- join / meet -----------------------------------------------------------

    def _least(self, mask: int, cone: Sequence[int]) -> int | None:
        for c in _bits(mask):
            if mask & ~cone[c] == 0:
                return c
        return None

    def join(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        hit = self._join.get(key)
        if hit is None:
            hit = self._least(self.up[a] & self.up[b], self.up)
            if hit is None:
                raise NotALattice(
                    f"no least upper bound for {self.labels[a]!r}, {self.labels[b]!r}"
                )
            self._join[key] = hit
        return hit

    def meet(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        hit = self._meet.get(key)
        if hit is None:
            hit = self._least(self.down[a] & self.down[b], self.down)
            if hit is None:
                raise NotALattice(
                    f"no greatest lower bound for {self.labels[a]!r}, {self.labels[b]!r}"
                )
            self._meet[key] = hit
        return hit

    def __repr__(self) -> str:
        r = self.rank[self.top_index] if self.rank is not None else None
        return f"GradedLattice(elements={self.element_count}, rank={r})"


def build_lattice(
    labels: Sequence[Hashable],
    leq: Callable[[Hashable, Hashable], bool] | Iterable[tuple[Hashable, Hashable]],
) -> GradedLattice:
    """Validate ``leq`` on ``labels`` and return the bounded poset.

    ``leq`` is either a predicate on labels or an iterable of ``(a, b)`` label
    pairs meaning ``a <= b``; reflexive pairs are implied for the pair form.

    Raises NotAPoset or NotBounded.
    """
    labels = list(labels)
    pos = {lab: i for i, lab in enumerate(labels)}
    up = [1 << i for i in range(len(labels))]
    if callable(leq):
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                if i != j and leq(a, b):
                    up[i] |= 1 << j
    else:
        for a, b in leq:
            up[pos[a]] |= 1 << pos[b]
    return GradedLattice(labels, up)


def from_covers(covers: Iterable[tuple[Hashable, Hashable]]) -> GradedLattice:
    """Transitive closure of cover pairs ``a < b``; labels in first-seen order."""
    labels: list[Hashable] = []
    pos: dict[Hashable, int] = {}
    edges = []
    for a, b in covers:
        for x in (a, b):
            if x not in pos:
                pos[x] = len(labels)
                labels.append(x)
        edges.append((pos[a], pos[b]))
    n = len(labels)
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        succ[i].append(j)
    up = []
    for start in range(n):
        seen = 1 << start
        stack = [start]
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w == start:
                    raise NotAPoset(f"cycle through {labels[start]!r}")
                if not (seen >> w) & 1:
                    seen |= 1 << w
                    stack.append(w)
        up.append(seen)
    return GradedLattice(labels, up)


def parse_cover_file(text: str) -> GradedLattice:
    """Read one ``a < b`` cover relation per line; ``#`` starts a comment."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("<") != 1:
            raise NotAPoset(f"line {lineno}: expected 'a < b', got {raw!r}")
        a, b = (s.strip() for s in line.split("<"))
        if not a or not b:
            raise NotAPoset(f"line {lineno}: empty label")
        pairs.append((a, b))
    if not pairs:
        raise NotBounded("no cover relations given")
    return from_covers(pairs)


# -- predicates ------------------------------------------------------------------


def join(L: GradedLattice, a: int, b: int) -> int:
    return L.join(a, b)


def meet(L: GradedLattice, a: int, b: int) -> int:
    return L.meet(a, b)


def is_lattice(L: GradedLattice) -> bool:
    try:
        for a, b in combinations(range(L.element_count), 2):
            L.join(a, b)
            L.meet(a, b)
    except NotALattice:
        return False
    return True


def is_graded(L: GradedLattice) -> bool:
    return L.is_graded()


def is_modular(L: GradedLattice) -> tuple[bool, tuple[int, int, int] | None]:
    """Scan all ``x >= z`` for ``x ^ (y v z) != (x ^ y) v z``.

    Returns ``(True, None)`` or ``(False, (x, y, z))`` with the first violating
    triple in index order.
    """
    N = L.element_count
    for x in range(N):
        for y in range(N):
            xy = L.meet(x, y)
            for z in _bits(L.down[x]):
                if L.meet(x, L.join(y, z)) != L.join(xy, z):
                    return False, (x, y, z)
    return True, None


def complements(L: GradedLattice, x: int) -> list[int]:
    return [
        y
        for y in range(L.element_count)
        if L.meet(x, y) == L.bottom and L.join(x, y) == L.top
    ]


def is_complemented(L: GradedLattice) -> bool:
    return all(complements(L, x) for x in range(L.element_count))


def maximal_chains(L: GradedLattice) -> list[tuple[int, ...]]:
    """All saturated chains from bottom to top, in lexicographic index order."""
    out: list[tuple[int, ...]] = []
    path = [L.bottom]

    def walk(v: int) -> None:
        if v == L.top:
            out.append(tuple(path))
            return
        for w in sorted(L.covers(v)):
            path.append(w)
            walk(w)
            path.pop()

    walk(L.bottom)
    return out


def interval(L: GradedLattice, a: int, b: int) -> GradedLattice:
    """The induced subposet ``{z : a <= z <= b}`` with the original labels."""
    if not L.leq(a, b):
        raise NotComparable(f"{L.labels[a]!r} is not below {L.labels[b]!r}")
    members = sorted(_bits(L.up[a] & L.down[b]))
    pos = {m: i for i, m in enumerate(members)}
    up = []
    for m in members:
        mask = 0
        for w in _bits(L.up[m] & L.down[b]):
            mask |= 1 << pos[w]
        up.append(mask)
    return GradedLattice([L.labels[m] for m in members], up)


def has_pentagon(L: GradedLattice) -> tuple[int, int, int, int, int] | None:
    """Brute-force search for an N5 sublattice ``o < a < b < i``, ``c`` beside.

    Independent modularity oracle; only sensible for small lattices.
    """
    N = L.element_count
    for a in range(N):
        for b in range(N):
            if not L.lt(a, b):
                continue
            for c in range(N):
                if L.comparable(a, c) or L.comparable(b, c):
                    continue
                i = L.join(a, c)
                o = L.meet(b, c)
                if L.join(b, c) == i and L.meet(a, c) == o:
                    return (o, a, b, c, i)
    return None
