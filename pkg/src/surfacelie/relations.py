"""Deciding relations between surface automorphisms in Out, level by level.

For a relation ``LHS = RHS`` the map ``phi = LHS o RHS^-1`` must be inner.
Level d asks whether some inner correction of phi acts trivially modulo
``I^{w(x)+d}`` on every free generator x. The obstruction at each level is a
class in ker f / im g; when it lies in im g the solving element is lifted to
a group word and the correction is applied, so the conjugator is built up
one degree at a time.

In the closed case a word is only defined modulo the normal closure of the
relator R. Leading terms that fall in the relator ideal are removed by
multiplying with iterated commutators of generators with R, which does not
change the automorphism of the surface group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import lattice
from .lie import GradedLieAlgebra, LieElement, standard_factorization
from .magnus import filtration_depth
from .out import DEFAULT_BOUND, _solve_bracket, solve_modulo_centralizers
from .words import (GroupMap, NonUnimodularAbelianization, NotSurjective, RelatorNotPreserved,
                    SurfacePresentation, Word, WordError, certify_automorphism, commutator,
                    inner_conjugator)

NameWord = Sequence[tuple[str, int]]


class UncertifiedMap(ValueError):
    pass


# -- lifting graded elements to words -------------------------------------------

class _Lifter:
    """Group words whose Magnus leading terms are prescribed Lie elements."""

    def __init__(self, A: GradedLieAlgebra):
        self.A = A
        self._lyndon: dict[tuple[int, ...], Word] = {}
        self._ideal: dict[int, tuple[list[list[int]], list[Word]]] = {}

    def lyndon(self, w: tuple[int, ...]) -> Word:
        if w not in self._lyndon:
            if len(w) == 1:
                self._lyndon[w] = Word.gen(w[0])
            else:
                u, v = standard_factorization(w)
                self._lyndon[w] = commutator(self.lyndon(u), self.lyndon(v))
        return self._lyndon[w]

    def free_coords(self, coords: Sequence[int], m: int) -> Word:
        out = Word()
        for w, c in zip(self.A.lyndon(m), coords):
            if c:
                out = out * self.lyndon(w) ** int(c)
        return out

    def element(self, u: LieElement, m: int) -> Word:
        return self.free_coords(self.A.free_coordinates(u, m), m)

    def ideal(self, m: int) -> tuple[list[list[int]], list[Word]]:
        """Spanning set of the relator ideal in degree m, with word lifts.

        The ideal generated by omega is spanned by ad(x_1)...ad(x_k) omega;
        the lift replaces omega by R and ad(x) by a group commutator.
        """
        if m not in self._ideal:
            A = self.A
            if m < 2:
                self._ideal[m] = ([], [])
            elif m == 2:
                P = SurfacePresentation(A.genus, 0)
                self._ideal[m] = ([A.free_coordinates(A.omega(), 2)], [P.relator()])
            else:
                prev_cols, prev_words = self.ideal(m - 1)
                cols, words = [], []
                for x in range(len(A.weights)):
                    gx = A.gen(x)
                    for v, w in zip(prev_cols, prev_words):
                        e = gx.bracket(A.from_free_coordinates(v, m - 1))
                        cols.append(A.free_coordinates(e, m))
                        words.append(commutator(Word.gen(x), w))
                self._ideal[m] = (cols, words)
        return self._ideal[m]


def surface_leading(z: Word, A: GradedLieAlgebra, lifter: _Lifter, bound: int
                    ) -> tuple[int | float, LieElement, Word]:
    """``(depth, leading term, correction)`` of z in the surface group.

    ``correction * z`` represents the same element of the surface group and
    its free Magnus leading term is the returned one. For punctured surfaces
    the correction is trivial.
    """
    corr = Word()
    while True:
        w = corr * z
        if not w:
            return math.inf, A.zero(), corr
        d, terms = filtration_depth(w, A.weights, bound)
        if d == math.inf:
            return d, A.zero(), corr
        lead = LieElement(A, terms)
        if not A.closed:
            return d, lead, corr
        cols, words = lifter.ideal(d)
        coeffs = None
        if cols:
            M = lattice.transpose(cols, A.free_rank(d))
            coeffs = lattice.solve_integer(M, A.free_coordinates(lead, d), len(cols))
        if coeffs is None:
            return d, lead, corr
        fix = Word()
        for c, wd in zip(coeffs, words):
            if c:
                fix = fix * wd ** c
        corr = fix.inverse() * corr


def normalized_depth(psi: GroupMap, A: GradedLieAlgebra, lifter: _Lifter, bound: int
                     ) -> tuple[int | float, GroupMap, list[LieElement], list[int | float]]:
    """Johnson-type depth, with closed-case images rewritten modulo R."""
    P = psi.presentation
    images = list(psi.images)
    leads: list[LieElement] = []
    depths: list[int | float] = []
    for i in range(P.free_rank):
        z = images[i] * Word.gen(i).inverse()
        d, lead, corr = surface_leading(z, A, lifter, bound)
        if corr:
            images[i] = corr * images[i]
        leads.append(lead)
        depths.append(d)
    best = min((d - P.weight(i) for i, d in enumerate(depths)), default=math.inf)
    if any(w != v for w, v in zip(images, psi.images)):
        psi = GroupMap(P, tuple(images), psi.inverse_map)
    return best, psi, leads, depths


def class_vector(psi: GroupMap, A: GradedLieAlgebra, k: int, leads: list[LieElement],
                 depths: list[int | float], bound: int) -> list[int]:
    """Graded class in the (gr^{k+1})^{2g} x (gr^k)^n layout of a depth-k map."""
    P = psi.presentation
    g, n = P.genus, P.punctures
    vec: list[int] = []
    for i in range(2 * g):
        lead = leads[i] if depths[i] == k + 1 else A.zero()
        vec += A.coordinates(lead, k + 1)
    for j in range(1, n + 1):
        c = P.eliminate(P.c(j))
        z = psi.apply(c) * c.inverse()
        d, terms = filtration_depth(z, A.weights, bound) if z else (math.inf, {})
        lead = LieElement(A, terms) if d == k + 2 else A.zero()
        vec += _solve_bracket(A, A.c_bar(j), lead, k)
    return vec


# -- verdicts -------------------------------------------------------------------

@dataclass
class RelationVerdict:
    name: str
    status: str  # "holds", "fails-at-degree-d" or "inconclusive-at-level-m"
    levels_passed: int
    failing_degree: int | None = None
    conjugator: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.status.startswith("fails")

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def evaluate(maps: dict[str, GroupMap], word: NameWord, P: SurfacePresentation) -> GroupMap:
    """Product of named maps; ``s t`` means ``s o t`` (t is applied first)."""
    out = GroupMap.identity(P)
    for name, e in word:
        if name not in maps:
            raise KeyError(f"undeclared map {name!r}")
        if e == 0:
            raise ValueError("exponent 0 in a relation word")
        f = maps[name] if e > 0 else maps[name].inverse()
        for _ in range(abs(e)):
            out = out.compose(f)
    return out


def certify_all(maps: dict[str, GroupMap]) -> None:
    """Certify every map and attach inverses; raises UncertifiedMap."""
    for name, phi in maps.items():
        try:
            certify_automorphism(phi)
            phi.with_inverse()
        except (NotSurjective, RelatorNotPreserved, NonUnimodularAbelianization,
                WordError) as exc:
            raise UncertifiedMap(f"{name}: {exc}") from exc


def verify_relation(maps: dict[str, GroupMap], lhs: NameWord, rhs: NameWord,
                    P: SurfacePresentation, level: int, bound: int | None = None,
                    name: str = "", A: GradedLieAlgebra | None = None,
                    exact_first: bool = True) -> RelationVerdict:
    """Decide ``lhs = rhs`` in Out up to the given level.

    With ``exact_first`` an exact conjugator is looked for before the
    degree-by-degree correction starts.
    """
    bound = bound or max(DEFAULT_BOUND, level + 2)
    A = A or GradedLieAlgebra.surface(P.genus, P.punctures)
    phi = evaluate(maps, lhs, P).compose(evaluate(maps, rhs, P).inverse())
    u = inner_conjugator(phi) if exact_first else None
    if u is not None:
        return RelationVerdict(name, "holds", level, conjugator=P.format_word(u))
    lifter = _Lifter(A)
    psi, U = phi, Word()
    for d in range(1, level + 1):
        if d + 2 > bound:
            return RelationVerdict(name, f"inconclusive-at-level-{d - 1}", d - 1,
                                   notes=[f"truncation bound {bound} reached"])
        k, psi, leads, depths = normalized_depth(psi, A, lifter, bound)
        if k >= d:
            continue
        if d == 1 or k < d - 1:
            return RelationVerdict(name, f"fails-at-degree-{max(k, 0)}", d - 1, max(k, 0),
                                   notes=["acts nontrivially on the associated graded"]
                                   if k < 1 else [])
        try:
            vec = class_vector(psi, A, k, leads, depths, bound)
        except ValueError:
            # inner automorphisms are braid type, so this is a genuine obstruction
            return RelationVerdict(name, f"fails-at-degree-{k}", d - 1, k,
                                   notes=["a puncture class is not a graded conjugate"])
        solved = solve_modulo_centralizers(A, k, vec)
        v = solved[0] if solved else None
        if v is None:
            return RelationVerdict(name, f"fails-at-degree-{k}", d - 1, k,
                                   notes=[f"nonzero class in gr^{k} Out"])
        lift = lifter.free_coords(A.free_coordinates(A.from_coordinates(v, k), k), k)
        for cand in (lift, lift.inverse()):
            trial = GroupMap.inner(P, cand.inverse()).compose(psi)
            k2, trial, _, _ = normalized_depth(trial, A, lifter, bound)
            if k2 >= d:
                psi, U = trial, U * cand
                break
        else:
            raise AssertionError(f"inner correction did not raise the depth at degree {k}")
    rest = inner_conjugator(psi)
    if rest is not None:
        return RelationVerdict(name, "holds", level, conjugator=P.format_word(U * rest))
    return RelationVerdict(name, f"inconclusive-at-level-{level}", level,
                           conjugator=P.format_word(U) if U else None)
