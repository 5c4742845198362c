import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfacelie.builtin import birman_relations, suzuki_generators
from surfacelie.words import (GroupMap, NotSimilitude, NotSurjective, RelatorNotPreserved,
                              SurfacePresentation, Word, WordError, abelianization_matrix,
                              certify_automorphism, commutator, cyclically_reduce,
                              fold_inverse, free_reduce, inner_conjugator, is_braid_type,
                              relator_conjugacy_class, standard_form, symplectic_class)

from conftest import nielsen_moves, random_word, words

a, b, c = Word.gen(0), Word.gen(1), Word.gen(2)


def test_free_reduce_cancellation():
    assert free_reduce([1, -1, 2]) == b
    assert free_reduce([]) == Word()
    assert free_reduce([1, 2, -2, -1, 3]) == c


@given(st.lists(st.integers(-4, 4).filter(bool), max_size=30))
def test_free_reduce_idempotent_and_shortening(letters):
    w = free_reduce(letters)
    assert free_reduce(w.letters) == w
    assert len(w) <= len(letters)
    assert all(x != -y for x, y in zip(w.letters, w.letters[1:]))


def test_cyclically_reduce_examples():
    assert cyclically_reduce(a * b * a.inverse()) == (b, a)
    ab = commutator(a, b)
    assert cyclically_reduce(ab) == (ab, Word())
    assert cyclically_reduce(a.inverse() * c * c * a) == (c * c, a.inverse())


@given(words(3, 16))
def test_cyclically_reduce_reconstructs(w):
    core, u = cyclically_reduce(w)
    assert u * core * u.inverse() == w
    if len(core) > 1:
        assert core.letters[0] != -core.letters[-1]


def test_relator_conjugacy_class():
    P2 = SurfacePresentation(2, 0)
    assert relator_conjugacy_class(P2.relator(), P2) == 1
    P1 = SurfacePresentation(1, 0)
    flip = GroupMap.from_dict(P1, {"b1": P1.b(1).inverse()})
    assert relator_conjugacy_class(flip(P1.relator()), P1) == -1
    assert relator_conjugacy_class(P1.a(1), P1) is None
    u = P2.a(2) * P2.b(1)
    assert relator_conjugacy_class(u * P2.relator().inverse() * u.inverse(), P2) == -1


def test_derived_generator_kills_relator():
    for g, n in [(1, 1), (0, 3), (2, 2)]:
        P = SurfacePresentation(g, n)
        assert P.eliminate(P.relator()) == Word()
        assert P.free_rank == 2 * g + n - 1


def test_presentation_rejects_bad_input():
    with pytest.raises(ValueError):
        SurfacePresentation(-1, 2)
    P = SurfacePresentation(1, 1)
    with pytest.raises(WordError):
        P.parse_word("a2")
    with pytest.raises(WordError):
        GroupMap.from_dict(P, {"c1": P.a(1)})


def test_apply_examples():
    S = suzuki_generators()
    P = SurfacePresentation(2, 0)
    assert GroupMap.identity(P)(P.relator()) == P.relator()
    assert S["alpha2"](P.b(1)) == P.b(1).inverse()
    assert S["alpha0"](P.b(1)) == P.b(1).inverse() * P.a(1) * P.b(1)


def test_apply_index_out_of_range():
    P = SurfacePresentation(1, 1)
    with pytest.raises(WordError):
        GroupMap.identity(P)(Word.gen(5))


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_compose_is_apply_after_apply(r):
    P = SurfacePresentation(1, 2)
    phi = GroupMap(P, tuple(random_word(r, 3, 5) for _ in range(3)))
    psi = GroupMap(P, tuple(random_word(r, 3, 5) for _ in range(3)))
    w = random_word(r, 3, 8)
    assert phi.compose(psi)(w) == phi(psi(w))
    assert GroupMap.identity(P).compose(phi) == phi == phi.compose(GroupMap.identity(P))
    chi = GroupMap(P, tuple(random_word(r, 3, 4) for _ in range(3)))
    assert phi.compose(psi).compose(chi) == phi.compose(psi.compose(chi))


def test_certify_cyclic_shift_of_handles():
    cert = certify_automorphism(suzuki_generators()["alpha1"])
    assert cert.orientation == 1
    assert cert.determinant == 1


def test_square_of_generator_is_not_surjective():
    P = SurfacePresentation(1, 1)
    with pytest.raises(NotSurjective):
        certify_automorphism(GroupMap.from_dict(P, {"a1": P.a(1) ** 2}))


def test_certify_twist_on_punctured_torus():
    P = SurfacePresentation(1, 1)
    tau = GroupMap.from_dict(P, {"b1": P.b(1) * P.a(1)})
    cert = certify_automorphism(tau)
    assert cert.method == "stallings-folding"
    inv = cert.inverse
    for i in range(P.free_rank):
        assert tau(inv(Word.gen(i))) == Word.gen(i)
        assert inv(tau(Word.gen(i))) == Word.gen(i)


def test_folding_inverse_of_random_nielsen_products(rng):
    P = SurfacePresentation(1, 2)
    moves = nielsen_moves(P)
    for _ in range(20):
        phi = GroupMap.identity(P)
        for _ in range(6):
            phi = phi.compose(rng.choice(moves))
        inv = fold_inverse(phi)
        assert phi.compose(inv).is_identity()


def test_closed_certification_rejects_non_relator_map():
    P = SurfacePresentation(2, 0)
    with pytest.raises(RelatorNotPreserved):
        certify_automorphism(GroupMap.from_dict(P, {"a1": P.a(2)}))


def test_braid_type_examples():
    P = SurfacePresentation(1, 1)
    inner = GroupMap.inner(P, P.a(1) * P.b(1) ** 2)
    w = is_braid_type(inner)
    assert w.is_braid and w.exponents == [1]
    tau = GroupMap.from_dict(P, {"b1": P.b(1) * P.a(1)})
    assert is_braid_type(tau).is_braid
    swap = GroupMap.from_dict(P, {"a1": P.b(1), "b1": P.a(1)})
    assert is_braid_type(swap).exponents == [-1]
    Q = SurfacePresentation(1, 2)
    bad = GroupMap.from_dict(Q, {"c1": Q.c(1) * Q.a(1)})
    w = is_braid_type(bad)
    assert not w.is_braid and w.failing_index == 1


def test_braid_type_closed_under_composition(rng):
    P = SurfacePresentation(1, 1)
    moves = nielsen_moves(P) + [GroupMap.inner(P, P.a(1)), GroupMap.inner(P, P.b(1))]
    for _ in range(30):
        phi = GroupMap.identity(P)
        for _ in range(4):
            m = rng.choice(moves)
            assert is_braid_type(m).is_braid
            phi = phi.compose(m)
        assert is_braid_type(phi).is_braid


def test_symplectic_class_examples():
    P = SurfacePresentation(2, 0)
    assert symplectic_class(abelianization_matrix(GroupMap.identity(P))) == 1
    M = abelianization_matrix(suzuki_generators()["alpha0"])
    assert M[:, 0].tolist() == [0, 0, -1, 0]
    assert M[:, 2].tolist() == [1, 0, 0, 0]
    assert symplectic_class(M) == 1
    with pytest.raises(NotSimilitude):
        symplectic_class(np.diag([2, 1, 1, 1]))


def test_orientation_reversal_has_multiplier_minus_one():
    P = SurfacePresentation(1, 0)
    flip = GroupMap.from_dict(P, {"b1": P.b(1).inverse()})
    cert = certify_automorphism(flip)
    assert cert.orientation == -1 and cert.multiplier == -1


def test_standard_form_is_alternating():
    J = standard_form(3)
    assert (J.T == -J).all()


def test_builtin_tables():
    S = suzuki_generators()
    P = SurfacePresentation(2, 0)
    a1, a2, b1, b2 = P.a(1), P.a(2), P.b(1), P.b(2)
    inv = Word.inverse
    assert S["alpha3"](b1) == b1 * (inv(a2) * inv(b2) * a2)
    assert S["alpha5"](a2) == a1
    assert S["alpha6"](b2) == b2 * a2 * (inv(b1) * inv(a1) * b1) * inv(a2)
    s1 = inv(b1) * inv(a1) * b1 * a1
    assert S["alpha4"](b1) == inv(b1) * inv(s1)
    assert set(S) == {f"alpha{i}" for i in range(7)}


def test_birman_relation_families():
    rel = birman_relations()
    assert len(rel["commute"]) == 6
    assert len(rel["braid"]) == 4
    (chain, rhs), = rel["chain6"]
    assert len(chain) == 30 and rhs == ()
    assert len(rel["hyperelliptic-central"]) == 5


def test_inner_conjugator_recovers_word(rng):
    P = SurfacePresentation(2, 1)
    for _ in range(20):
        u = random_word(rng, P.free_rank, 8)
        found = inner_conjugator(GroupMap.inner(P, u))
        assert found is not None
        assert GroupMap.inner(P, found) == GroupMap.inner(P, u)
    tau = GroupMap.from_dict(P, {"b1": P.b(1) * P.a(1)})
    assert inner_conjugator(tau) is None
