import random

import flint
import pytest

from surfacelie import lattice


def _random(rng, m, n, entries=(0, 0, 0, 1, -1, 2, 3, -4)):
    return [[rng.choice(entries) for _ in range(n)] for _ in range(m)]


def _matmul(A, B):
    return lattice.matmul(A, B)


def test_smith_form_transforms(rng):
    for _ in range(100):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = _random(rng, m, n)
        S = lattice.smith_form(A)
        D = _matmul(_matmul(S.U, A), S.V)
        for i in range(m):
            for j in range(n):
                expect = S.diagonal[i] if i == j and i < len(S.diagonal) else 0
                assert D[i][j] == expect
        nz = [d for d in S.diagonal if d]
        assert all(y % x == 0 for x, y in zip(nz, nz[1:]))
        assert abs(lattice.determinant(S.U)) == 1 and abs(lattice.determinant(S.V)) == 1


def test_invariant_factors_against_flint(rng):
    for _ in range(40):
        m, n = rng.randint(5, 70), rng.randint(5, 70)
        A = _random(rng, m, n)
        D = flint.fmpz_mat(A).snf()
        expect = [abs(int(D[i, i])) for i in range(min(m, n)) if D[i, i] != 0]
        assert lattice.invariant_factors(A, n) == expect


def test_torsion_example():
    assert lattice.invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert lattice.smith_form([[2, 4], [6, 8]]).torsion == [2, 4]


def test_kernel_basis_is_saturated(rng):
    for _ in range(200):
        m, n = rng.randint(1, 6), rng.randint(1, 9)
        A = _random(rng, m, n)
        K = lattice.kernel_basis(A, n)
        assert len(K) == n - lattice.rank(A, n)
        for v in K:
            assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in A)
        if K:
            assert all(d == 1 for d in lattice.invariant_factors(K, n))


def test_solve_integer(rng):
    A = [[2, 0], [0, 3]]
    assert lattice.solve_integer(A, [4, 9]) == [2, 3]
    assert lattice.solve_integer(A, [1, 0]) is None
    for _ in range(50):
        M = _random(rng, 4, 3)
        x = [rng.randint(-3, 3) for _ in range(3)]
        b = [sum(r * y for r, y in zip(row, x)) for row in M]
        sol = lattice.solve_integer(M, b)
        assert sol is not None
        assert [sum(r * y for r, y in zip(row, sol)) for row in M] == b


def test_solve_rational_unique():
    assert lattice.solve_rational_unique([[1, 0], [0, 2], [1, 1]], [1, 4, 3]) == [1, 2]
    assert lattice.solve_rational_unique([[2]], [1]) is None
    with pytest.raises(ValueError):
        lattice.solve_rational_unique([[1, 1]], [1])


def test_unit_pivot_reduce_preserves_invariants(rng):
    for _ in range(30):
        A = _random(rng, 8, 8)
        ones, rest = lattice.unit_pivot_reduce(A)
        tail = lattice.invariant_factors(rest) if rest and rest[0] else []
        assert [1] * ones + tail == lattice.smith_form(A).diagonal[:ones + len(tail)]
