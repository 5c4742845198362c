"""Suzuki's automorphisms alpha_0..alpha_6 and Birman's genus-2 relations."""
from __future__ import annotations

from .words import GroupMap, SurfacePresentation, Word


def _s(P: SurfacePresentation, i: int) -> Word:
    """s_i = b_i^-1 a_i^-1 b_i a_i"""
    a, b = P.a(i), P.b(i)
    return b.inverse() * a.inverse() * b * a


def suzuki_generators(genus: int = 2) -> dict[str, GroupMap]:
    """The seven automorphisms of the closed genus-g surface group, g >= 2."""
    if genus < 2:
        raise ValueError("the Suzuki generators need genus >= 2")
    P = SurfacePresentation(genus, 0)
    a, b, s = P.a, P.b, lambda i: _s(P, i)
    inv = Word.inverse
    g = genus

    maps = {
        "alpha0": {"a1": inv(b(1)), "b1": inv(b(1)) * a(1) * b(1)},
        "alpha1": {**{f"a{i}": a(i % g + 1) for i in range(1, g + 1)},
                   **{f"b{i}": b(i % g + 1) for i in range(1, g + 1)}},
        "alpha2": {"b1": inv(b(1))},
        "alpha3": {
            "a2": b(2) * a(2) * (inv(b(1)) * a(1) * b(1)) * (inv(a(2)) * inv(b(2)) * a(2)),
            "b1": b(1) * (inv(a(2)) * inv(b(2)) * a(2)),
        },
        "alpha4": {"a1": inv(b(1)) * inv(a(1)) * b(1),
                   "b1": inv(b(1)) * inv(s(1))},
        "alpha5": {"a1": inv(s(1)) * a(2) * s(1), "a2": a(1),
                   "b1": inv(s(1)) * b(2) * s(1), "b2": b(1)},
        "alpha6": {
            "b1": a(1) * b(1) * inv(a(2)) * s(2) * (inv(b(1)) * inv(a(1)) * b(1)),
            "b2": b(2) * a(2) * (inv(b(1)) * inv(a(1)) * b(1)) * inv(a(2)),
        },
    }
    return {name: GroupMap.from_dict(P, imgs) for name, imgs in maps.items()}


Relation = tuple[tuple[tuple[str, int], ...], tuple[tuple[str, int], ...]]


def birman_relations() -> dict[str, list[Relation]]:
    """Birman's five relation families for MC(X_2) on names s1..s5.

    Each relation is ``(lhs, rhs)`` with sides as ``(name, exponent)`` tuples;
    an empty side is the identity.
    """
    def word(*names) -> tuple[tuple[str, int], ...]:
        return tuple((n, 1) for n in names)

    sig = [f"s{i}" for i in range(1, 6)]
    commute = [(word(sig[i], sig[j]), word(sig[j], sig[i]))
               for i in range(5) for j in range(i + 2, 5)]
    braid = [(word(sig[i], sig[i + 1], sig[i]), word(sig[i + 1], sig[i], sig[i + 1]))
             for i in range(4)]
    chain = word(*sig) * 6
    hyper = word("s1", "s2", "s3", "s4", "s5", "s5", "s4", "s3", "s2", "s1")
    return {
        "commute": commute,
        "braid": braid,
        "chain6": [(chain, ())],
        "hyperelliptic2": [(hyper * 2, ())],
        "hyperelliptic-central": [(hyper + word(s), word(s) + hyper) for s in sig],
    }
