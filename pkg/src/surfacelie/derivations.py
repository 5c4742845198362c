"""Graded derivations of a free graded Lie algebra.

A derivation of weight shift ``i`` is fixed by the images of the free
generators; generator ``x`` of weight ``w`` must go to an element of degree
``w + i``. Elements are tensor expansions, so a derivation is extended to
them monomial by monomial through the Leibniz rule of the tensor algebra,
which restricts to the Lie algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import lattice
from .lie import ClosedAlgebraError, GradedLieAlgebra, LieElement
from .magnus import Monomial


def _require_free(A: GradedLieAlgebra) -> None:
    if A.closed:
        raise ClosedAlgebraError("derivations are computed on free algebras only")


@dataclass(frozen=True)
class GradedDerivation:
    algebra: GradedLieAlgebra
    shift: int
    images: tuple[LieElement, ...]

    def __post_init__(self):
        A = self.algebra
        _require_free(A)
        if len(self.images) != len(A.weights):
            raise ValueError("need one image per generator")
        for k, u in enumerate(self.images):
            if u.algebra is not A:
                raise ValueError("image lives in a different algebra")
            bad = [d for d in u.degrees() if d != A.weights[k] + self.shift]
            if bad:
                raise ValueError(f"image of {A.names[k]} has degree {bad[0]}, "
                                 f"expected {A.weights[k] + self.shift}")

    @classmethod
    def zero(cls, A: GradedLieAlgebra, shift: int = 0) -> "GradedDerivation":
        return cls(A, shift, tuple(A.zero() for _ in A.weights))

    @classmethod
    def from_images(cls, A: GradedLieAlgebra, shift: int,
                    images: Sequence[LieElement] | dict[str, LieElement]) -> "GradedDerivation":
        """Images by position or by generator name (unnamed generators go to 0)."""
        if isinstance(images, dict):
            unknown = set(images) - set(A.names)
            if unknown:
                raise ValueError(f"unknown generators {sorted(unknown)}")
            images = [images.get(name, A.zero()) for name in A.names]
        return cls(A, shift, tuple(images))

    @classmethod
    def inner(cls, v: LieElement) -> "GradedDerivation":
        """``ad(v) : u -> [v, u]`` for homogeneous v."""
        A = v.algebra
        degs = v.degrees()
        if len(degs) > 1:
            raise ValueError("ad(v) needs a homogeneous v")
        shift = degs[0] if degs else 0
        return cls(A, shift, tuple(v.bracket(x) for x in A.generators()))

    def extend(self, u: LieElement) -> LieElement:
        """D(u) through the Leibniz rule."""
        if u.algebra is not self.algebra:
            raise ValueError("element lives in a different algebra")
        images = [img.terms for img in self.images]
        out: dict[Monomial, int] = {}
        for mono, c in u.terms.items():
            for p, letter in enumerate(mono):
                head, tail = mono[:p], mono[p + 1:]
                for m, d in images[letter].items():
                    key = head + m + tail
                    out[key] = out.get(key, 0) + c * d
        return LieElement(self.algebra, out)

    __call__ = extend

    def bracket(self, other: "GradedDerivation") -> "GradedDerivation":
        """``D1 o D2 - D2 o D1``, again a derivation, of shift ``i + j``."""
        if other.algebra is not self.algebra:
            raise ValueError("derivations of different algebras")
        imgs = tuple(self.extend(b) - other.extend(a)
                     for a, b in zip(self.images, other.images))
        return GradedDerivation(self.algebra, self.shift + other.shift, imgs)

    def __add__(self, other: "GradedDerivation") -> "GradedDerivation":
        if other.shift != self.shift:
            raise ValueError("sum of derivations of different shifts")
        return GradedDerivation(self.algebra, self.shift,
                                tuple(a + b for a, b in zip(self.images, other.images)))

    def __rmul__(self, k: int) -> "GradedDerivation":
        return GradedDerivation(self.algebra, self.shift, tuple(k * a for a in self.images))

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedDerivation) and other.algebra is self.algebra
                and (self.is_zero() and other.is_zero()
                     or (other.shift == self.shift and other.images == self.images)))

    def __hash__(self):
        return hash((self.shift, self.images))

    def is_zero(self) -> bool:
        return all(u.is_zero() for u in self.images)

    def coordinates(self) -> list[int]:
        """Concatenated coordinates of the generator images."""
        A = self.algebra
        out: list[int] = []
        for k, u in enumerate(self.images):
            out += A.coordinates(u, A.weights[k] + self.shift)
        return out


def bracket_derivations(D1: GradedDerivation, D2: GradedDerivation) -> GradedDerivation:
    return D1.bracket(D2)


def derivation_basis(A: GradedLieAlgebra, shift: int) -> list[GradedDerivation]:
    """Derivations sending one generator to one basis element and the rest to 0."""
    _require_free(A)
    out = []
    for k, w in enumerate(A.weights):
        for b in A.basis(w + shift):
            imgs = [A.zero()] * len(A.weights)
            imgs[k] = b
            out.append(GradedDerivation(A, shift, tuple(imgs)))
    return out


def der_rank(A: GradedLieAlgebra, shift: int) -> int:
    """Sum over generators of r_{w(gen) + shift}."""
    _require_free(A)
    return sum(A.rank(w + shift) for w in A.weights)


def ad_matrix(A: GradedLieAlgebra, shift: int) -> list[list[int]]:
    """Matrix of v -> ad(v) from L_shift into the shift-``shift`` derivations."""
    _require_free(A)
    cols = [GradedDerivation.inner(v).coordinates() for v in A.basis(shift)]
    return lattice.transpose(cols, der_rank(A, shift)) if cols else []


def inner_rank(A: GradedLieAlgebra, shift: int) -> int:
    M = ad_matrix(A, shift)
    return lattice.rank(M, A.rank(shift)) if M else 0


@dataclass
class DerRanks:
    shift: int
    der_rank: int
    inner_rank: int
    quotient_rank: int
    torsion: list[int]

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def der_mod_inner(A: GradedLieAlgebra, shift: int) -> DerRanks:
    """Rank and cokernel torsion of ad : L_shift -> Der^shift."""
    d = der_rank(A, shift)
    M = ad_matrix(A, shift)
    factors = lattice.invariant_factors(M, A.rank(shift)) if M else []
    r = len(factors)
    return DerRanks(shift, d, r, d - r, [f for f in factors if f > 1])


def der_mod_inner_rank(A: GradedLieAlgebra, shift: int) -> int:
    return der_mod_inner(A, shift).quotient_rank


def ihara_special(f: LieElement) -> GradedDerivation:
    """D_f with D_f(x) = 0 and D_f(y) = [y, f] on a two-letter alphabet {x, y}."""
    A = f.algebra
    if len(A.weights) != 2 or A.closed:
        raise ValueError("Ihara's derivations need a free algebra on two letters")
    degs = f.degrees()
    if len(degs) > 1:
        raise ValueError("f must be homogeneous")
    if not degs:
        return GradedDerivation.zero(A)
    x, y = A.generators()
    return GradedDerivation(A, degs[0], (A.zero(), y.bracket(f)))


def ihara_algebra(weights: str = "xy") -> GradedLieAlgebra:
    """Two-letter algebra for Ihara's derivations.

    ``"xy"`` gives x, y of weight 1; ``"surface"`` is the (0,3) surface
    algebra, whose free letters c1, c2 both have weight 2.
    """
    if weights == "xy":
        return GradedLieAlgebra.free(2)
    if weights == "surface":
        return GradedLieAlgebra.surface(0, 3)
    raise ValueError(f"unknown weight convention {weights!r}")


def ihara_injective(A: GradedLieAlgebra, degree: int) -> bool:
    """f -> D_f is injective on the Lyndon basis of the given degree."""
    cols = [ihara_special(f).coordinates() for f in A.basis(degree)]
    if not cols:
        return True
    return lattice.rank(lattice.transpose(cols), len(cols)) == len(cols)
