"""Weight-truncated noncommutative integer polynomials and the Magnus expansion.

A monomial is a tuple of 0-based letter indices; letter ``i`` has weight
``weights[i]`` and the polynomial keeps only monomials of total weight <= W.
"""
from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

from .words import Word

Monomial = tuple[int, ...]


class TruncationError(ValueError):
    pass


class IdentityDepth(ValueError):
    """The identity word lies in every filtration step."""


def monomial_weight(m: Monomial, weights: Sequence[int]) -> int:
    return sum(weights[i] for i in m)


class TensorPoly:
    __slots__ = ("weights", "bound", "terms")

    def __init__(self, weights: Sequence[int], bound: int | None,
                 terms: Mapping[Monomial, int] | None = None):
        self.weights = tuple(weights)
        self.bound = bound
        clean: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c and (bound is None or monomial_weight(m, self.weights) <= bound):
                    clean[m] = clean.get(m, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self.terms = clean

    @classmethod
    def one(cls, weights: Sequence[int], bound: int | None) -> "TensorPoly":
        return cls(weights, bound, {(): 1})

    @classmethod
    def letter(cls, weights: Sequence[int], bound: int | None, i: int) -> "TensorPoly":
        return cls(weights, bound, {(i,): 1})

    def _check(self, other: "TensorPoly") -> None:
        if self.bound != other.bound or self.weights != other.weights:
            raise TruncationError("mismatched truncation or alphabet")

    def _new(self, terms: dict[Monomial, int]) -> "TensorPoly":
        p = TensorPoly.__new__(TensorPoly)
        p.weights, p.bound = self.weights, self.bound
        p.terms = {m: c for m, c in terms.items() if c}
        return p

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return self._new(t)

    def __neg__(self) -> "TensorPoly":
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + (-other)

    def scale(self, k: int) -> "TensorPoly":
        return self._new({m: k * c for m, c in self.terms.items()}) if k else self._new({})

    def __rmul__(self, k: int) -> "TensorPoly":
        return self.scale(k)

    def _by_weight(self) -> dict[int, list[tuple[Monomial, int]]]:
        out: dict[int, list[tuple[Monomial, int]]] = {}
        w = self.weights
        for m, c in self.terms.items():
            out.setdefault(monomial_weight(m, w), []).append((m, c))
        return out

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        W = self.bound
        left, right = self._by_weight(), other._by_weight()
        t: dict[Monomial, int] = {}
        for w1, terms1 in left.items():
            for w2, terms2 in right.items():
                if W is not None and w1 + w2 > W:
                    continue
                for m1, c1 in terms1:
                    for m2, c2 in terms2:
                        m = m1 + m2
                        t[m] = t.get(m, 0) + c1 * c2
        return self._new(t)

    def mul_letter(self, i: int, inverse: bool = False) -> "TensorPoly":
        """Right-multiply by ``1 + X_i`` or by its inverse series."""
        W, wi = self.bound, self.weights[i]
        t = dict(self.terms)
        if not inverse:
            for m, c in self.terms.items():
                if W is None or monomial_weight(m, self.weights) + wi <= W:
                    mm = m + (i,)
                    t[mm] = t.get(mm, 0) + c
            return self._new(t)
        if W is None:
            raise TruncationError("inverse series needs a truncation bound")
        for m, c in self.terms.items():
            w = monomial_weight(m, self.weights)
            k, sign = 1, -1
            while w + k * wi <= W:
                mm = m + (i,) * k
                t[mm] = t.get(mm, 0) + sign * c
                k += 1
                sign = -sign
        return self._new(t)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TensorPoly) and self.bound == other.bound
                and self.weights == other.weights and self.terms == other.terms)

    def __hash__(self):
        return hash((self.weights, self.bound, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def homogeneous(self, degree: int) -> dict[Monomial, int]:
        w = self.weights
        return {m: c for m, c in self.terms.items() if monomial_weight(m, w) == degree}

    def min_positive_weight(self) -> int | None:
        w = self.weights
        ws = [monomial_weight(m, w) for m in self.terms if m]
        return min(ws) if ws else None

    def truncate(self, bound: int) -> "TensorPoly":
        return TensorPoly(self.weights, bound, self.terms)

    def mod(self, modulus: int) -> "TensorPoly":
        """Coefficients reduced into ``[0, modulus)``."""
        return self._new({m: c % modulus for m, c in self.terms.items()})

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: (len(mc[0]), mc[0]))

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"X_{names[i] if names else i}" for i in m) or "1"
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TensorPoly({self.format()}, W={self.bound})"


def magnus_expand(w: Word, weights: Sequence[int], bound: int) -> TensorPoly:
    """Magnus expansion ``x -> 1 + X_x`` truncated at total weight ``bound``."""
    used = {abs(x) - 1 for x in w.letters}
    if any(i >= len(weights) for i in used):
        raise TruncationError("word uses a letter outside the alphabet")
    if bound < max(weights, default=0):
        raise TruncationError("truncation bound below the largest generator weight")
    p = TensorPoly.one(weights, bound)
    for x in w.letters:
        p = p.mul_letter(abs(x) - 1, inverse=x < 0)
    return p


def filtration_depth(w: Word, weights: Sequence[int], bound: int
                     ) -> tuple[int | float, dict[Monomial, int]]:
    """``(m, leading)``: smallest nonconstant Magnus weight and its homogeneous part.

    Returns ``(math.inf, {})`` when nothing below the bound survives, which
    for a nontrivial word means the depth exceeds ``bound``.
    """
    if not w:
        raise IdentityDepth("the identity has infinite depth")
    p = magnus_expand(w, weights, bound)
    m = p.min_positive_weight()
    if m is None:
        return math.inf, {}
    return m, p.homogeneous(m)


def coproduct_primitive(terms: Mapping[Monomial, int]) -> bool:
    """Check ``Delta(L) = L (x) 1 + 1 (x) L`` for a homogeneous polynomial.

    Uses the shuffle coproduct: the coefficient of ``u (x) v`` in ``Delta(L)``
    is the sum over words ``x`` of ``L[x]`` times the number of ways ``x``
    is a shuffle of ``u`` and ``v``.
    """
    from itertools import combinations

    delta: dict[tuple[Monomial, Monomial], int] = {}
    for x, c in terms.items():
        n = len(x)
        for k in range(1, n):
            for pos in combinations(range(n), k):
                s = set(pos)
                u = tuple(x[i] for i in pos)
                v = tuple(x[i] for i in range(n) if i not in s)
                delta[(u, v)] = delta.get((u, v), 0) + c
    return all(c == 0 for c in delta.values())
