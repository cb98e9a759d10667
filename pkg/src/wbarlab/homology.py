"""Normalized chains of truncated complexes and integral homology.

Boundary matrices are assembled over the nondegenerate cells (degenerate
faces contribute nothing) and diagonalized by exact integer row and column
operations with minimal-absolute-value pivoting.  All arithmetic inside the
diagonalization uses Python integers, so elementary divisors are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientTruncation
from .simplicial import TruncatedComplex


@dataclass(frozen=True)
class HomologyGroup:
    """Free rank plus torsion coefficients forming a divisibility chain."""

    betti: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion coefficients must form a divisibility chain")
        if any(t <= 1 for t in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")

    def is_trivial(self):
        return self.betti == 0 and not self.torsion

    def mod_p_rank(self, p: int) -> int:
        """Rank of the reduction mod p (tensor only; no Tor correction)."""
        return self.betti + sum(1 for t in self.torsion if t % p == 0)

    def __str__(self):
        parts = ["Z"] * self.betti + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


class ChainComplex:
    """Boundary matrices of normalized chains up to the truncation degree.

    ``boundary[d]`` maps degree-d chains to degree-(d-1) chains as a numpy
    integer matrix of shape (rank_{d-1}, rank_d); ``boundary[0]`` is the
    empty map.
    """

    def __init__(self, ranks, boundaries):
        self.ranks = list(ranks)
        self.boundary = boundaries
        self.top = len(ranks) - 1

    def verify_dd_zero(self):
        for d in range(2, self.top + 1):
            prod = self.boundary[d - 1] @ self.boundary[d]
            if prod.size and np.any(prod):
                raise ArithmeticError(f"boundary squared is nonzero at degree {d}")
        return True


def normalized_chains(x: TruncatedComplex) -> ChainComplex:
    """Alternating-sum boundaries over nondegenerate cells."""
    ranks = [x.cell_counts[d] for d in range(x.truncation + 1)]
    boundaries = [np.zeros((0, 0), dtype=np.int64)]
    for d in range(1, x.truncation + 1):
        mat = np.zeros((ranks[d - 1], ranks[d]), dtype=np.int64)
        for c in range(ranks[d]):
            for i, f in enumerate(x.cell_faces[d][c]):
                if f.is_nondegenerate():
                    mat[f.cell, c] += (-1) ** i
        boundaries.append(mat)
    return ChainComplex(ranks, boundaries)


def smith_normal_form(matrix):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns ``(U, D, V)`` with ``U @ M @ V == D``, D diagonal with a
    divisibility chain, and U, V unimodular.  Input may be a numpy array or a
    list of lists; everything is handled as exact Python integers.
    """
    a = [[int(v) for v in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        arow, urow = a[src], u[src]
        adst, udst = a[dst], u[dst]
        for t in range(cols):
            adst[t] += k * arow[t]
        for t in range(rows):
            udst[t] += k * urow[t]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # minimal nonzero entry of the remaining block becomes the pivot
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < pivot[0]):
                    pivot = (abs(a[i][j]), i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                add_row(t, i, -q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                add_col(t, j, -q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the remaining block by the pivot
        offender = None
        d = a[t][t]
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % d != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        if a[t][t] < 0:
            for j in range(cols):
                a[t][j] = -a[t][j]
            for j in range(rows):
                u[t][j] = -u[t][j]
        t += 1
    return u, a, v


def elementary_divisors(matrix):
    _, d, _ = smith_normal_form(matrix)
    out = []
    for t in range(min(len(d), len(d[0]) if d else 0)):
        if d[t][t]:
            out.append(abs(d[t][t]))
    return out


def matrix_rank(matrix):
    return len(elementary_divisors(matrix))


def integer_determinant(matrix):
    """Bareiss fraction-free determinant, exact over the integers."""
    a = [[int(v) for v in row] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def homology(chain: ChainComplex, i: int) -> HomologyGroup:
    """H_i of the complex; needs the boundary from degree i+1."""
    if i < 0 or i + 1 > chain.top:
        raise InsufficientTruncation(
            f"homology in degree {i} needs boundaries up to degree {i + 1}"
        )
    rank_in = matrix_rank(chain.boundary[i]) if i >= 1 else 0
    divisors = elementary_divisors(chain.boundary[i + 1])
    rank_out = len(divisors)
    betti = chain.ranks[i] - rank_in - rank_out
    torsion = tuple(d for d in divisors if d > 1)
    return HomologyGroup(betti, torsion)


def homology_of_complex(x: TruncatedComplex, i: int) -> HomologyGroup:
    return homology(normalized_chains(x), i)


def homology_report(x: TruncatedComplex, i_max: int):
    chain = normalized_chains(x)
    chain.verify_dd_zero()
    out = []
    for i in range(i_max + 1):
        h = homology(chain, i)
        out.append(
            {
                "degree": i,
                "betti": h.betti,
                "torsion": list(h.torsion),
                "truncation": x.truncation,
            }
        )
    return out
