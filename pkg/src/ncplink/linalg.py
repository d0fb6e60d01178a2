"""Exact subspaces of V = {y in F^n : sum(y) = 0} over Q or GF(p).

Every Subspace carries its basis in reduced row-echelon form, so equality
and hashing are plain tuple comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .errors import DimensionMismatch, FieldMismatch, NotInV


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """``FieldSpec()`` is Q; ``FieldSpec(p)`` is the prime field GF(p)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip().lower()
        if text in ("q", "qq", "rational", "rationals"):
            return cls()
        if text.startswith("gf:") or text.startswith("gf"):
            return cls(int(text[3:] if text.startswith("gf:") else text[2:]))
        raise ValueError(f"unknown field {text!r}; use 'q' or 'gf:<p>'")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "q" if self.p is None else f"gf:{self.p}"

    def coerce(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def reduce(self, x):
        return x if self.p is None else x % self.p


QQ = FieldSpec()
GF2 = FieldSpec(2)


def rref(rows: Iterable[Sequence], field: FieldSpec, ncols: int) -> tuple[tuple, ...]:
    """Reduced row-echelon form with zero rows dropped."""
    m = [[field.coerce(x) for x in r] for r in rows]
    for r in m:
        if len(r) != ncols:
            raise DimensionMismatch(f"expected length {ncols}, got {len(r)}")
    pivot_row = 0
    for col in range(ncols):
        pr = next((i for i in range(pivot_row, len(m)) if m[i][col] != 0), None)
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        piv = m[pivot_row]
        s = field.inv(piv[col])
        if s != 1:
            piv[:] = [field.reduce(x * s) for x in piv]
        for i in range(len(m)):
            if i != pivot_row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [field.reduce(a - f * b) for a, b in zip(m[i], piv)]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return tuple(tuple(r) for r in m[:pivot_row])


@dataclass(frozen=True)
class Subspace:
    ambient_n: int
    field: FieldSpec
    basis: tuple[tuple, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x != 0) for r in self.basis)

    def contains_vector(self, vec: Sequence) -> bool:
        v = [self.field.coerce(x) for x in vec]
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c != 0:
                v = [self.field.reduce(a - c * b) for a, b in zip(v, row)]
        return all(x == 0 for x in v)

    def __str__(self) -> str:
        return format_matrix(self.basis)


def format_matrix(rows: Sequence[Sequence]) -> str:
    if not rows:
        return "[]"
    return "\n".join("[" + " ".join(f"{str(x):>4}" for x in r) + "]" for r in rows)


def _make(n: int, field: FieldSpec, rows) -> Subspace:
    return Subspace(n, field, rref(rows, field, n))


def subspace_from_vectors(vectors: Iterable[Sequence], field: FieldSpec, n: int | None = None) -> Subspace:
    """Canonical span of ``vectors``; each must lie in V (zero coordinate sum)."""
    vectors = [list(v) for v in vectors]
    if n is None:
        if not vectors:
            raise DimensionMismatch("ambient dimension needed for an empty spanning set")
        n = len(vectors[0])
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatch(f"vector {v} has length {len(v)}, expected {n}")
        if field.coerce(sum(field.coerce(x) for x in v)) != 0:
            raise NotInV(f"coordinates of {v} do not sum to zero over {field}")
    return _make(n, field, vectors)


def zero(n: int, field: FieldSpec) -> Subspace:
    return Subspace(n, field, ())


def whole(n: int, field: FieldSpec) -> Subspace:
    """V itself."""
    rows = []
    for i in range(n - 1):
        r = [0] * n
        r[i], r[n - 1] = 1, -1
        rows.append(r)
    return _make(n, field, rows)


def _check(a: Subspace, b: Subspace) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.ambient_n != b.ambient_n:
        raise DimensionMismatch(f"ambient {a.ambient_n} vs {b.ambient_n}")


def sum_(a: Subspace, b: Subspace) -> Subspace:
    _check(a, b)
    return _make(a.ambient_n, a.field, a.basis + b.basis)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: echelonise [[A, A], [B, 0]]; rows with empty left half span A & B."""
    _check(a, b)
    n = a.ambient_n
    if not a.basis or not b.basis:
        return zero(n, a.field)
    z = [0] * n
    block = [list(r) + list(r) for r in a.basis] + [list(r) + z for r in b.basis]
    ech = rref(block, a.field, 2 * n)
    rows = [r[n:] for r in ech if all(x == 0 for x in r[:n])]
    return _make(n, a.field, rows)


def contains(a: Subspace, b: Subspace) -> bool:
    """``b`` is a subspace of ``a``."""
    _check(a, b)
    return all(a.contains_vector(r) for r in b.basis)


def equal(a: Subspace, b: Subspace) -> bool:
    _check(a, b)
    return a.basis == b.basis


def dim(a: Subspace) -> int:
    return a.dim


def are_complementary(a: Subspace, b: Subspace) -> bool:
    _check(a, b)
    return a.dim + b.dim == a.ambient_n - 1 and intersect(a, b).dim == 0


def all_subspaces(n: int, field: FieldSpec) -> list[Subspace]:
    """Every subspace of V in F^n; finite fields only, small n only."""
    if field.is_rational:
        raise ValueError("the subspace lattice over Q is infinite")
    p = field.p
    vectors = [
        v for v in product(range(p), repeat=n) if sum(v) % p == 0 and any(v)
    ]
    found = {zero(n, field)}
    frontier = [zero(n, field)]
    while frontier:
        nxt = []
        for W in frontier:
            for v in vectors:
                if not W.contains_vector(v):
                    U = _make(n, field, W.basis + (v,))
                    if U not in found:
                        found.add(U)
                        nxt.append(U)
        frontier = nxt
    return sorted(found, key=lambda W: (W.dim, W.basis))
