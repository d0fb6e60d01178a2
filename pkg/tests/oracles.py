"""Independent reference computations used by the tests.

None of these call into ncplink beyond plain data types; they trade speed
for obviousness (formulas, brute force over point sets, sympy ranks).
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb

import sympy


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def bell(n: int) -> int:
    # Bell triangle
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def nc_tree_count(n: int) -> int:
    """Non-crossing spanning trees of a convex n-gon: C(3n-3, n-1) / (2n-1)."""
    return comb(3 * n - 3, n - 1) // (2 * n - 1)


def kreweras_chain_count(n: int) -> int:
    """Maximal chains of NCP_n: n^(n-2)."""
    return n ** (n - 2)


def set_partitions(points):
    """All set partitions of a list, as lists of frozensets (recursive)."""
    points = list(points)
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for part in set_partitions(rest):
        yield [frozenset([first])] + part
        for k in range(len(part)):
            yield part[:k] + [part[k] | {first}] + part[k + 1 :]


def crossing_by_quadruples(blocks) -> bool:
    """Some a < b < c < d with a, c in one block and b, d in another."""
    owner = {x: k for k, b in enumerate(blocks) for x in b}
    pts = sorted(owner)
    for a, b, c, d in combinations(pts, 4):
        if owner[a] == owner[c] and owner[b] == owner[d] and owner[a] != owner[b]:
            return True
    return False


def kreweras_by_interleaving(blocks, n: int) -> frozenset:
    """Coarsest partition of the midpoints whose union with ``blocks`` stays non-crossing.

    Point i sits at position 2i - 1 and the midpoint after i at position 2i.
    """
    base = [frozenset(2 * x - 1 for x in b) for b in blocks]
    best = None
    for q in set_partitions(range(1, n + 1)):
        mids = [frozenset(2 * x for x in b) for b in q]
        if crossing_by_quadruples(base + mids):
            continue
        if best is None or len(q) < len(best):
            best = q
    return frozenset(frozenset(b) for b in best)


def partition_matrix(blocks, n: int):
    """Constraint rows: coordinate sum over each block, one row per block."""
    rows = []
    for b in blocks:
        rows.append([1 if i + 1 in b else 0 for i in range(n)])
    return sympy.Matrix(rows)


def partition_subspace_dim(blocks, n: int) -> int:
    """dim {y : block sums vanish} = n - rank of the block-indicator matrix."""
    return n - partition_matrix(blocks, n).rank()


def contained_over_q(blocks_a, blocks_b, n: int) -> bool:
    """f(a) inside f(b): every constraint of b follows from those of a."""
    A = partition_matrix(blocks_a, n)
    B = partition_matrix(blocks_b, n)
    return A.rank() == A.col_join(B).rank()


def gf2_span(vectors, n: int) -> frozenset:
    """All GF(2) combinations of the vectors, as bit tuples."""
    out = set()
    for coeffs in product((0, 1), repeat=len(vectors)):
        v = [0] * n
        for c, w in zip(coeffs, vectors):
            if c:
                v = [(x + y) % 2 for x, y in zip(v, w)]
        out.add(tuple(v))
    return frozenset(out)


def gf2_partition_space(blocks, n: int) -> frozenset:
    """Vectors of GF(2)^n with even weight on every block."""
    out = set()
    for v in product((0, 1), repeat=n):
        if all(sum(v[x - 1] for x in b) % 2 == 0 for b in blocks):
            out.add(v)
    return frozenset(out)


def gaussian_binomial(m: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(m: int, q: int) -> int:
    return sum(gaussian_binomial(m, k, q) for k in range(m + 1))


def cayley(n: int) -> int:
    return n ** (n - 2)

