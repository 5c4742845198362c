"""Exact integer linear algebra: Smith form, ranks, kernels and integer solves.

Small matrices go through a pure-Python Smith normal form that also returns
the unimodular transforms. Large ones use FLINT (``python-flint``) for rank,
row echelon and Hermite forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import flint
import numpy as np

Matrix = list[list[int]]


def as_rows(M) -> Matrix:
    if isinstance(M, np.ndarray):
        return [[int(x) for x in row] for row in M.tolist()]
    return [[int(x) for x in row] for row in M]


def shape(M: Matrix, ncols: int | None = None) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else (ncols or 0))


def _fmpz(M: Matrix, ncols: int) -> flint.fmpz_mat:
    if not M:
        return flint.fmpz_mat(0, ncols)
    return flint.fmpz_mat(M)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Matrix, ncols: int | None = None) -> Matrix:
    r, c = shape(M, ncols)
    return [[M[i][j] for i in range(r)] for j in range(c)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def determinant(M: Matrix) -> int:
    M = as_rows(M)
    if not M:
        return 1
    return int(flint.fmpz_mat(M).det())


def rank(M, ncols: int | None = None) -> int:
    M = as_rows(M)
    r, c = shape(M, ncols)
    if r == 0 or c == 0:
        return 0
    return int(_fmpz(M, c).rank())


@dataclass
class SmithForm:
    """``U @ M @ V == diag(diagonal)`` (padded with zeros) with U, V unimodular."""

    diagonal: list[int]
    U: Matrix
    V: Matrix
    nrows: int
    ncols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


def smith_form(M, ncols: int | None = None) -> SmithForm:
    """Smith normal form with transforms; pure Python, meant for modest sizes."""
    A = as_rows(M)
    m, n = shape(A, ncols)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            ra, rs = A[dst], A[src]
            for k in range(n):
                if rs[k]:
                    ra[k] += q * rs[k]
            ua, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ua[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in A:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(i, t, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(j, t, -q)
                    if A[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t into the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [A[k][k] for k in range(min(m, n))]
    return SmithForm(diag, U, V, m, n)


def unit_pivot_reduce(M: Matrix) -> tuple[int, Matrix]:
    """Eliminate unit pivots sparsely; returns ``(count, remaining block)``.

    Each pivot of absolute value 1 splits off an invariant factor 1 and
    replaces the matrix by its Schur complement, which is unimodularly
    equivalent. Pivots are chosen from the sparsest rows to limit fill-in.
    """
    import heapq

    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(M):
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            rows[i] = d
            for j in d:
                cols.setdefault(j, set()).add(i)
    heap = [(len(d), i) for i, d in rows.items()]
    heapq.heapify(heap)
    count = 0
    while heap:
        nnz, i = heapq.heappop(heap)
        if i not in rows or len(rows[i]) != nnz:
            continue
        row = rows[i]
        units = [j for j, x in row.items() if x in (1, -1)]
        if not units:
            continue
        j = min(units, key=lambda c: len(cols[c]))
        p = row[j]
        del rows[i]
        for c in row:
            cols[c].discard(i)
        for k in list(cols[j]):
            other = rows[k]
            f = other[j] * p
            for c, x in row.items():
                v = other.get(c, 0) - f * x
                if v:
                    if c not in other:
                        cols[c].add(k)
                    other[c] = v
                else:
                    if c in other:
                        del other[c]
                        cols[c].discard(k)
            if other:
                heapq.heappush(heap, (len(other), k))
            else:
                del rows[k]
        del cols[j]
        count += 1
    live_cols = sorted(c for c, rs in cols.items() if rs)
    index = {c: k for k, c in enumerate(live_cols)}
    rest = []
    for r in rows.values():
        v = [0] * len(live_cols)
        for c, x in r.items():
            v[index[c]] = x
        rest.append(v)
    return count, rest


def invariant_factors(M, ncols: int | None = None) -> list[int]:
    """Nonzero Smith invariants (including 1s)."""
    A = as_rows(M)
    m, n = shape(A, ncols)
    if m == 0 or n == 0:
        return []
    if m * n <= 2500:
        return [d for d in smith_form(A, n).diagonal if d]
    ones, rest = unit_pivot_reduce(A)
    if not rest or not rest[0]:
        return [1] * ones
    if ones == 0:
        return _invariant_factors_flint(rest, len(rest), len(rest[0]))
    return [1] * ones + invariant_factors(rest)


def _invariant_factors_flint(A: Matrix, m: int, n: int) -> list[int]:
    H = _fmpz(A, n)
    if m > n:
        H = H.transpose()
    S = H.hnf()
    # drop zero rows before the (much cheaper) Smith form of the square part
    rows = [r for r in S.tolist() if any(r)]
    if not rows:
        return []
    D = flint.fmpz_mat(rows).snf()
    return [abs(int(D[i, i])) for i in range(min(D.nrows(), D.ncols())) if D[i, i] != 0]


def _unit_kernel(A: Matrix, n: int) -> Matrix | None:
    """Kernel via sparse Gauss-Jordan elimination using only unit pivots.

    With unit pivots the reduced form is integral and the free-variable basis
    is already saturated. Returns None if some row has no usable unit pivot.
    """
    import heapq

    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(A):
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            rows[i] = d
            for j in d:
                cols.setdefault(j, set()).add(i)
    pending = [(len(d), i) for i, d in rows.items()]
    heapq.heapify(pending)
    pivot_of: dict[int, int] = {}  # row -> pivot column
    stuck: set[int] = set()
    while pending:
        nnz, i = heapq.heappop(pending)
        if i not in rows or i in pivot_of or len(rows[i]) != nnz:
            continue
        row = rows[i]
        units = [j for j, x in row.items() if x in (1, -1) and j not in pivot_of.values()]
        if not units:
            stuck.add(i)
            continue
        j = min(units, key=lambda c: len(cols[c]))
        if row[j] == -1:
            for c in row:
                row[c] = -row[c]
        pivot_of[i] = j
        stuck.discard(i)
        for k in list(cols[j]):
            if k == i:
                continue
            other = rows[k]
            f = other[j]
            for c, x in row.items():
                v = other.get(c, 0) - f * x
                if v:
                    if c not in other:
                        cols.setdefault(c, set()).add(k)
                    other[c] = v
                elif c in other:
                    del other[c]
                    cols[c].discard(k)
            if not other:
                del rows[k]
                stuck.discard(k)
            elif k not in pivot_of:
                heapq.heappush(pending, (len(other), k))
                stuck.discard(k)
    if any(k in rows and k not in pivot_of for k in stuck):
        return None
    if any(k not in pivot_of for k in rows):
        return None
    pivots = set(pivot_of.values())
    by_col: dict[int, list[tuple[int, int]]] = {}
    for i, j in pivot_of.items():
        for c, x in rows[i].items():
            if c != j:
                by_col.setdefault(c, []).append((j, x))
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        v = [0] * n
        v[f] = 1
        for p, x in by_col.get(f, []):
            v[p] = -x
        basis.append(v)
    return basis


def kernel_basis(M, ncols: int | None = None) -> Matrix:
    """Rows forming a Z-basis of the (saturated) integer kernel ``{x : M x = 0}``."""
    A = as_rows(M)
    m, n = shape(A, ncols)
    if n == 0:
        return []
    if m == 0:
        return identity(n)
    fast = _unit_kernel(A, n)
    if fast is not None:
        return fast
    # Hermite form of [M^T | I]; rows with vanishing left block span the kernel
    aug = [[A[i][j] for i in range(m)] + [int(k == j) for k in range(n)] for j in range(n)]
    H = flint.fmpz_mat(aug).hnf().tolist()
    return [[int(x) for x in row[m:]] for row in H if not any(row[:m])]


def solve_integer(M, b: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """An integer solution of ``M x = b`` or None."""
    A = as_rows(M)
    m, n = shape(A, ncols)
    b = [int(x) for x in b]
    if n == 0:
        return [] if not any(b) else None
    S = smith_form(A, n)
    c = [sum(u * x for u, x in zip(row, b)) for row in S.U]
    y = [0] * n
    for k in range(m):
        d = S.diagonal[k] if k < len(S.diagonal) else 0
        if d == 0:
            if c[k]:
                return None
        else:
            if c[k] % d:
                return None
            y[k] = c[k] // d
    return [sum(v * t for v, t in zip(row, y)) for row in S.V]


def solve_rational_unique(M, b: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """Integer solution for full-column-rank ``M`` via FLINT row reduction.

    Returns None when no rational solution exists or it is not integral.
    Raises ValueError if ``M`` is not injective.
    """
    A = as_rows(M)
    m, n = shape(A, ncols)
    aug = [row + [int(x)] for row, x in zip(A, b)]
    R, den, rk = _fmpz(aug, n + 1).rref()
    rows = R.tolist()
    pivots = [next(j for j in range(n + 1) if rows[i][j] != 0) for i in range(rk)]
    if n in pivots:
        return None
    if rk != n:
        raise ValueError("matrix is not injective")
    den = int(den)
    x = [0] * n
    for i, p in enumerate(pivots):
        num = int(rows[i][n])
        if num % den:
            return None
        x[p] = num // den
    return x


def saturation_index(M, ncols: int | None = None) -> int:
    """Index of the column lattice of M inside its saturation (product of invariants)."""
    prod = 1
    for d in invariant_factors(M, ncols):
        prod *= d
    return prod


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
