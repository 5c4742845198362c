import pytest

from surfacelie.derivations import (GradedDerivation, ad_matrix, bracket_derivations,
                                    der_mod_inner, der_rank, derivation_basis, ihara_algebra,
                                    ihara_injective, ihara_special, inner_rank)
from surfacelie.lie import ClosedAlgebraError, GradedLieAlgebra


def _random_element(A, m, rng):
    out = A.zero()
    for b in A.basis(m):
        out = out + rng.randint(-2, 2) * b
    return out


def _random_derivation(A, shift, rng):
    imgs = [_random_element(A, w + shift, rng) for w in A.weights]
    return GradedDerivation(A, shift, tuple(imgs))


@pytest.fixture
def xy():
    return GradedLieAlgebra.free(2)


def test_zero_derivation(xy, rng):
    D = GradedDerivation.zero(xy, 2)
    assert D(_random_element(xy, 3, rng)).is_zero()


def test_inner_derivation_is_bracket(xy, rng):
    v, u = _random_element(xy, 2, rng), _random_element(xy, 3, rng)
    assert GradedDerivation.inner(v)(u) == v.bracket(u)


def test_leibniz_example(xy):
    x, y = xy.generators()
    D = GradedDerivation(xy, 1, (xy.zero(), y.bracket(x)))
    assert D(x.bracket(y)) == x.bracket(y.bracket(x))


def test_image_degree_checked(xy):
    x, y = xy.generators()
    with pytest.raises(ValueError):
        GradedDerivation(xy, 2, (x.bracket(y), xy.zero()))


@pytest.mark.parametrize("A", [GradedLieAlgebra.free(2), GradedLieAlgebra.surface(1, 2)])
def test_leibniz_on_random_pairs(A, rng):
    for shift in (1, 2):
        D = _random_derivation(A, shift, rng)
        for _ in range(15):
            p, q = rng.randint(1, 3), rng.randint(1, 3)
            u, v = _random_element(A, p, rng), _random_element(A, q, rng)
            assert D(u.bracket(v)) == D(u).bracket(v) + u.bracket(D(v))
            assert set(D(u).degrees()) <= {p + shift}


def test_bracket_of_derivations(xy, rng):
    D = _random_derivation(xy, 1, rng)
    assert bracket_derivations(D, D).is_zero()
    E = _random_derivation(xy, 2, rng)
    C = D.bracket(E)
    assert C.shift == 3
    u = _random_element(xy, 2, rng)
    assert C(u) == D(E(u)) - E(D(u))


def test_ad_is_lie_homomorphism(xy, rng):
    for _ in range(10):
        u = _random_element(xy, rng.randint(1, 3), rng)
        v = _random_element(xy, rng.randint(1, 3), rng)
        lhs = GradedDerivation.inner(u).bracket(GradedDerivation.inner(v))
        assert lhs == GradedDerivation.inner(u.bracket(v))


def test_rank_examples(xy):
    assert der_rank(xy, 1) == 2
    assert inner_rank(xy, 1) == 2
    assert der_rank(xy, -1) == 0
    assert der_mod_inner(xy, 2).quotient_rank == 3
    assert len(derivation_basis(xy, 2)) == der_rank(xy, 2)
    assert len(ad_matrix(xy, 3)) == der_rank(xy, 3)


def test_inner_rank_equals_lie_rank_for_free_algebras():
    A = GradedLieAlgebra.free(3)
    for i in range(1, 4):
        r = der_mod_inner(A, i)
        assert r.inner_rank == A.rank(i) and r.torsion == []


def test_closed_algebra_refused():
    with pytest.raises(ClosedAlgebraError):
        der_rank(GradedLieAlgebra.surface(2, 0), 1)


def test_ihara_examples(xy):
    x, y = xy.generators()
    D = ihara_special(x)
    assert D.images[0].is_zero() and D.images[1] == y.bracket(x)
    assert ihara_special(xy.zero()).is_zero()
    with pytest.raises(ValueError):
        ihara_special(GradedLieAlgebra.free(3).gen(0))


def test_ihara_linear(xy, rng):
    f, h = _random_element(xy, 4, rng), _random_element(xy, 4, rng)
    assert ihara_special(f + h) == ihara_special(f) + ihara_special(h)
    assert ihara_special(3 * f) == 3 * ihara_special(f)


def test_ihara_kernel_in_degree_one_is_y(xy):
    x, y = xy.generators()
    assert ihara_special(y).is_zero()
    assert not ihara_special(x).is_zero()
    assert not ihara_injective(xy, 1)


@pytest.mark.parametrize("weights", ["xy", "surface"])
def test_ihara_injective_above_degree_one(weights):
    A = ihara_algebra(weights)
    low = min(A.weights)
    for m in range(2 * low, 6 * low + 1):
        assert ihara_injective(A, m)
        assert all(not ihara_special(f).images[1].is_zero() for f in A.basis(m))
