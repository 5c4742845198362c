"""Graded free Lie algebras on weighted alphabets, with Lyndon bases.

Lie elements are stored through their expansion in the free associative
algebra, so equality is plain dictionary equality and coordinates come from
unitriangularity of Lyndon bracketings.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterator, Mapping, Sequence

import flint

from . import lattice
from .magnus import Monomial, TensorPoly, monomial_weight


class NotInLattice(ValueError):
    """Polynomial is not an integral Lie element of the expected degree."""


class ClosedAlgebraError(ValueError):
    pass


# -- Lyndon words ------------------------------------------------------------

def is_lyndon(w: Sequence[int]) -> bool:
    n = len(w)
    if n == 0:
        return False
    t = tuple(w)
    return all(t < t[i:] + t[:i] for i in range(1, n))


def lyndon_words(k: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """All Lyndon words over ``range(k)`` of length <= max_len (Duval's order)."""
    if k <= 0 or max_len <= 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def standard_factorization(w: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``w = u v`` with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def witt_ranks(weights: Sequence[int], max_degree: int) -> list[int]:
    """``r[1..max_degree]`` with prod (1 - t^k)^{r_k} = 1 - sum_x t^{w(x)}.

    Index 0 of the returned list is 0.
    """
    N = max_degree
    count = [0] * (N + 1)
    for w in weights:
        if w <= N:
            count[w] += 1
    h = [0] * (N + 1)  # 1 / (1 - p)
    h[0] = 1
    for d in range(1, N + 1):
        h[d] = sum(count[k] * h[d - k] for k in range(1, d + 1))
    r = [0] * (N + 1)
    for d in range(1, N + 1):
        a = sum(k * count[k] * h[d - k] for k in range(1, d + 1))
        a -= sum(e * r[e] for e in range(1, d) if d % e == 0)
        assert a % d == 0
        r[d] = a // d
    return r


# -- polynomials -------------------------------------------------------------

def _add_into(t: dict, terms: Mapping, k: int = 1) -> None:
    for m, c in terms.items():
        v = t.get(m, 0) + k * c
        if v:
            t[m] = v
        else:
            t.pop(m, None)


def _commutator_terms(p: Mapping[Monomial, int], q: Mapping[Monomial, int]) -> dict[Monomial, int]:
    t: dict[Monomial, int] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            c = c1 * c2
            a, b = m1 + m2, m2 + m1
            t[a] = t.get(a, 0) + c
            t[b] = t.get(b, 0) - c
    return {m: c for m, c in t.items() if c}


class LieElement:
    """An element of a graded Lie algebra, stored as its tensor expansion."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "GradedLieAlgebra", terms: Mapping[Monomial, int] | None = None):
        self.algebra = algebra
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def _same(self, other: "LieElement") -> None:
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._same(other)
        t = dict(self.terms)
        _add_into(t, other.terms)
        return LieElement(self.algebra, t)

    def __sub__(self, other: "LieElement") -> "LieElement":
        self._same(other)
        t = dict(self.terms)
        _add_into(t, other.terms, -1)
        return LieElement(self.algebra, t)

    def __neg__(self) -> "LieElement":
        return LieElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __rmul__(self, k: int) -> "LieElement":
        return LieElement(self.algebra, {m: k * c for m, c in self.terms.items()})

    def __mul__(self, k: int) -> "LieElement":
        return k * self

    def __eq__(self, other) -> bool:
        return (isinstance(other, LieElement) and other.algebra is self.algebra
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        w = self.algebra.weights
        return sorted({monomial_weight(m, w) for m in self.terms})

    def component(self, degree: int) -> "LieElement":
        w = self.algebra.weights
        return LieElement(self.algebra, {m: c for m, c in self.terms.items()
                                         if monomial_weight(m, w) == degree})

    def bracket(self, other: "LieElement") -> "LieElement":
        self._same(other)
        return LieElement(self.algebra, _commutator_terms(self.terms, other.terms))

    def to_tensor(self, bound: int | None = None) -> TensorPoly:
        return TensorPoly(self.algebra.weights, bound, self.terms)

    def __repr__(self) -> str:
        return f"LieElement({self.to_tensor().format(self.algebra.names)})"


def bracket(u: LieElement, v: LieElement) -> LieElement:
    return u.bracket(v)


class GradedLieAlgebra:
    """Free Lie algebra on a weighted alphabet, optionally modulo the ideal of one
    degree-2 element (the closed-surface relation).
    """

    def __init__(self, weights: Sequence[int], names: Sequence[str] | None = None,
                 genus: int | None = None, punctures: int | None = None,
                 closed: bool = False):
        self.weights = tuple(int(w) for w in weights)
        if any(w < 1 for w in self.weights):
            raise ValueError("letter weights must be positive")
        self.names = list(names) if names else [f"x{i + 1}" for i in range(len(self.weights))]
        self.genus = genus
        self.punctures = punctures
        self.closed = closed
        self._lyndon: dict[int, list[tuple[int, ...]]] = {}
        self._expansions: dict[tuple[int, ...], dict[Monomial, int]] = {}
        self._index: dict[int, dict[tuple[int, ...], int]] = {}
        self._quotient: dict[int, "_Quotient"] = {}
        self._ideal: dict[int, list[list[int]]] = {}

    @classmethod
    def free(cls, num_letters: int, weight: int = 1) -> "GradedLieAlgebra":
        names = ["x", "y", "z", "w"][:num_letters] if num_letters <= 4 else None
        return cls([weight] * num_letters, names)

    @classmethod
    def surface(cls, genus: int, punctures: int) -> "GradedLieAlgebra":
        """Gr of the genus-g, n-punctured surface group.

        Letters a_i, b_i (weight 1) and c_1..c_{n-1} (weight 2); c_n is derived.
        With n = 0 the algebra is the quotient by the ideal of sum [a_i, b_i].
        """
        g, n = genus, punctures
        names = ([f"a{i}" for i in range(1, g + 1)] + [f"b{i}" for i in range(1, g + 1)]
                 + [f"c{j}" for j in range(1, n)])
        weights = [1] * (2 * g) + [2] * max(n - 1, 0)
        return cls(weights, names, genus=g, punctures=n, closed=(n == 0))

    def __repr__(self) -> str:
        if self.genus is not None:
            return f"GradedLieAlgebra(genus={self.genus}, punctures={self.punctures})"
        return f"GradedLieAlgebra(weights={self.weights})"

    @property
    def is_surface(self) -> bool:
        return self.genus is not None

    # -- elements --

    def zero(self) -> LieElement:
        return LieElement(self)

    def gen(self, i: int) -> LieElement:
        return LieElement(self, {(i,): 1})

    def generators(self) -> list[LieElement]:
        return [self.gen(i) for i in range(len(self.weights))]

    def element(self, name: str) -> LieElement:
        if name in self.names:
            return self.gen(self.names.index(name))
        if self.is_surface and name == f"c{self.punctures}" and self.punctures >= 1:
            return self.c_bar(self.punctures)
        raise KeyError(name)

    def omega(self) -> LieElement:
        """sum_i [a_i, b_i]"""
        g = self.genus or 0
        out = self.zero()
        for i in range(g):
            out = out + self.gen(i).bracket(self.gen(g + i))
        return out

    def c_bar(self, j: int) -> LieElement:
        """Image of the j-th puncture loop; the last one is derived."""
        g, n = self.genus, self.punctures
        if not self.is_surface or not 1 <= j <= n:
            raise KeyError(f"c{j}")
        if j < n:
            return self.gen(2 * g + j - 1)
        out = -self.omega()
        for k in range(1, n):
            out = out - self.gen(2 * g + k - 1)
        return out

    # -- free Lyndon basis --

    def lyndon(self, m: int) -> list[tuple[int, ...]]:
        """Lyndon words of total weight m, sorted."""
        if m not in self._lyndon:
            k = len(self.weights)
            words = []
            if k and m >= 1:
                max_len = m // min(self.weights)
                words = sorted(w for w in lyndon_words(k, max_len)
                               if monomial_weight(w, self.weights) == m)
            self._lyndon[m] = words
            self._index[m] = {w: i for i, w in enumerate(words)}
        return self._lyndon[m]

    def expansion(self, w: tuple[int, ...]) -> dict[Monomial, int]:
        """Tensor expansion of the standard bracketing of a Lyndon word."""
        if w not in self._expansions:
            if len(w) == 1:
                self._expansions[w] = {w: 1}
            else:
                u, v = standard_factorization(w)
                self._expansions[w] = _commutator_terms(self.expansion(u), self.expansion(v))
        return self._expansions[w]

    def bracketing(self, w: tuple[int, ...]) -> str:
        if len(w) == 1:
            return self.names[w[0]]
        u, v = standard_factorization(w)
        return f"[{self.bracketing(u)},{self.bracketing(v)}]"

    def free_basis(self, m: int) -> list[LieElement]:
        return [LieElement(self, self.expansion(w)) for w in self.lyndon(m)]

    def free_rank(self, m: int) -> int:
        return len(self.lyndon(m))

    def witt_rank(self, m: int) -> int:
        if self.closed:
            raise ClosedAlgebraError("witt_rank is for free algebras; use rank()")
        if m < 1:
            return 0
        return witt_ranks(self.weights, m)[m]

    def free_coordinates(self, u: LieElement | Mapping[Monomial, int], m: int) -> list[int]:
        """Coordinates of a degree-m element over the Lyndon basis of degree m."""
        terms = dict(u.terms if isinstance(u, LieElement) else u)
        words = self.lyndon(m)
        index = self._index[m]
        w = self.weights
        coords = [0] * len(words)
        for mono in terms:
            if monomial_weight(mono, w) != m:
                raise NotInLattice(f"term {mono} is not of degree {m}")
        while terms:
            lead = min(terms)
            i = index.get(lead)
            if i is None:
                raise NotInLattice(f"leading word {lead} is not Lyndon")
            c = terms[lead]
            coords[i] += c
            _add_into(terms, self.expansion(lead), -c)
        return coords

    def from_free_coordinates(self, coords: Sequence[int], m: int) -> LieElement:
        t: dict[Monomial, int] = {}
        for w, c in zip(self.lyndon(m), coords):
            if c:
                _add_into(t, self.expansion(w), int(c))
        return LieElement(self, t)

    # -- closed-surface quotient --

    def ideal_component(self, m: int) -> list[list[int]]:
        """Lattice basis (rows, free coordinates) of the relation ideal in degree m.

        ideal_2 = span(omega), ideal_m = sum_k [L_k, ideal_{m-k}].
        """
        if not self.closed:
            raise ClosedAlgebraError("ideal_component needs the closed flag")
        if m < 2:
            return []
        if m not in self._ideal:
            if m == 2:
                gens = [self.free_coordinates(self.omega(), 2)]
            else:
                gens = []
                for k in range(1, m - 1):
                    ideal_lower = self.ideal_component(m - k)
                    if not ideal_lower:
                        continue
                    lower = [self.from_free_coordinates(v, m - k) for v in ideal_lower]
                    for x in self.free_basis(k):
                        for y in lower:
                            gens.append(self.free_coordinates(x.bracket(y), m))
            self._ideal[m] = _row_basis(gens, self.free_rank(m))
        return self._ideal[m]

    def _quot(self, m: int) -> "_Quotient":
        if m not in self._quotient:
            self._quotient[m] = _Quotient(self.ideal_component(m), self.free_rank(m))
        return self._quotient[m]

    def torsion(self, m: int) -> list[int]:
        return self._quot(m).torsion if self.closed else []

    # -- uniform interface --

    def rank(self, m: int) -> int:
        if m < 1:
            return 0
        if not self.closed:
            return self.free_rank(m)
        return len(self._quot(m).free_columns)

    def basis(self, m: int) -> list[LieElement]:
        """Z-basis of gr^m (representatives of the quotient in the closed case)."""
        if not self.closed:
            return self.free_basis(m)
        q = self._quot(m)
        return [self.from_free_coordinates(v, m) for v in q.representatives()]

    def lyndon_basis(self, m: int) -> list[LieElement]:
        return self.basis(m)

    def coordinates(self, u: LieElement, m: int) -> list[int]:
        """Integer coordinates of ``u`` (homogeneous of degree m) over ``basis(m)``."""
        if u.algebra is not self:
            raise ValueError("element belongs to another algebra")
        v = self.free_coordinates(u, m)
        if not self.closed:
            return v
        return self._quot(m).reduce(v)

    def from_coordinates(self, coords: Sequence[int], m: int) -> LieElement:
        out = self.zero()
        for b, c in zip(self.basis(m), coords):
            if c:
                out = out + int(c) * b
        return out

    def is_zero_in_quotient(self, u: LieElement, m: int) -> bool:
        return not any(self.coordinates(u, m))

    def check_membership(self, u: LieElement) -> None:
        """Raise NotInLattice unless every component is integral Lie."""
        for d in u.degrees():
            self.free_coordinates(u.component(d), d)


def _row_basis(rows: list[list[int]], n: int) -> list[list[int]]:
    """Basis of the row lattice via Hermite normal form."""
    if not rows:
        return []
    H = flint.fmpz_mat(rows).hnf().tolist()
    return [[int(x) for x in r] for r in H if any(r)]


class _Quotient:
    """Z^n / (row lattice), with coordinates on the free part."""

    def __init__(self, ideal_rows: list[list[int]], n: int):
        self.n = n
        self.rows = ideal_rows
        self.pivots = [next(j for j, x in enumerate(r) if x) for r in ideal_rows]
        self.unit = all(ideal_rows[i][p] == 1 for i, p in enumerate(self.pivots))
        if self.unit:
            ps = set(self.pivots)
            self.free_columns = [j for j in range(n) if j not in ps]
            self.torsion: list[int] = []
        else:
            S = lattice.smith_form(lattice.transpose(ideal_rows, n), len(ideal_rows))
            self.smith = S
            k = S.rank
            self.torsion = S.torsion
            self.free_columns = list(range(k, n))

    def reduce(self, v: list[int]) -> list[int]:
        v = list(v)
        if self.unit:
            for r, p in zip(self.rows, self.pivots):
                c = v[p]
                if c:
                    for j, x in enumerate(r):
                        if x:
                            v[j] -= c * x
            return [v[j] for j in self.free_columns]
        y = [sum(u * x for u, x in zip(row, v)) for row in self.smith.U]
        return [y[j] for j in self.free_columns]

    def representatives(self) -> list[list[int]]:
        if self.unit:
            return [[int(i == j) for i in range(self.n)] for j in self.free_columns]
        Uinv = flint.fmpz_mat(self.smith.U).inv().tolist()
        return [[int(Uinv[i][j]) for i in range(self.n)] for j in self.free_columns]
