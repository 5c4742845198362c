"""Graded pieces of braid-type outer automorphism groups.

For a surface algebra L = Gr pi and a degree m the maps

    g_m : gr^m -> (gr^{m+1})^{2g} x (gr^m)^n,
          x -> ([x, a_i])_i x ([x, b_i])_i x (x)_j
    f_m : (gr^{m+1})^{2g} x (gr^m)^n -> gr^{m+2},
          (r, s, t) -> sum_i ([a_i, s_i] + [r_i, b_i]) + sum_j [t_j, c_j]

satisfy f_m o g_m = 0, and gr^m of the braid-type Out group is ker f / im g.
Matrices are dense integer row lists, rows indexed by target coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence
from functools import cached_property

import numpy as np
from scipy import sparse

from . import lattice
from .lie import GradedLieAlgebra, LieElement
from .magnus import IdentityDepth, filtration_depth
from .words import GroupMap, Word, is_braid_type

DEFAULT_BOUND = 8


class ExactnessFailed(Exception):
    pass


class NotInFiltration(ValueError):
    """The automorphism acts nontrivially on the associated graded."""


class QuotientUnavailable(ValueError):
    pass


@dataclass
class GradedModuleMap:
    """Integer matrix with labelled source and target coordinates."""

    name: str
    matrix: list[list[int]]
    source: list[str]
    target: list[str]

    def __post_init__(self):
        assert len(self.matrix) == len(self.target)
        assert all(len(row) == len(self.source) for row in self.matrix)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target), len(self.source)

    def sparse(self) -> sparse.csr_matrix:
        r, c = self.shape
        if r == 0 or c == 0:
            return sparse.csr_matrix((r, c), dtype=np.int64)
        return sparse.csr_matrix(np.array(self.matrix, dtype=np.int64))

    @cached_property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @cached_property
    def invariant_factors(self) -> list[int]:
        return lattice.invariant_factors(self.matrix, len(self.source))

    @property
    def cokernel_torsion(self) -> list[int]:
        return [d for d in self.invariant_factors if d > 1]

    def check_smith(self) -> bool:
        """The cached invariants agree with a fresh computation."""
        return self.invariant_factors == lattice.invariant_factors(self.matrix, len(self.source))

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.matrix]

    def apply(self, v) -> list[int]:
        return [sum(a * b for a, b in zip(row, v)) for row in self.matrix]


def _layout(A: GradedLieAlgebra, m: int) -> list[tuple[str, int, int]]:
    """Slots of (gr^{m+1})^{2g} x (gr^m)^n as ``(slot name, degree, rank)``."""
    g, n = A.genus, A.punctures
    slots = [(f"r{i}", m + 1, A.rank(m + 1)) for i in range(1, g + 1)]
    slots += [(f"s{i}", m + 1, A.rank(m + 1)) for i in range(1, g + 1)]
    slots += [(f"t{j}", m, A.rank(m)) for j in range(1, n + 1)]
    return slots


def _labels(slots) -> list[str]:
    return [f"{name}[{k}]" for name, _, r in slots for k in range(r)]


def _require_surface(A: GradedLieAlgebra) -> None:
    if not A.is_surface:
        raise ValueError("g_m and f_m need a surface algebra")


def g_map(A: GradedLieAlgebra, m: int) -> GradedModuleMap:
    _require_surface(A)
    if m < 1:
        raise ValueError("degree must be >= 1")
    g, n = A.genus, A.punctures
    slots = _layout(A, m)
    cols = []
    for x in A.basis(m):
        col: list[int] = []
        for i in range(g):
            col += A.coordinates(x.bracket(A.gen(i)), m + 1)
        for i in range(g):
            col += A.coordinates(x.bracket(A.gen(g + i)), m + 1)
        xc = A.coordinates(x, m)
        for _ in range(n):
            col += xc
        cols.append(col)
    rows = lattice.transpose(cols, len(_labels(slots))) if cols else [[] for _ in _labels(slots)]
    return GradedModuleMap(f"g_{m}", rows, [f"gr{m}[{k}]" for k in range(A.rank(m))], _labels(slots))


def f_value(A: GradedLieAlgebra, r: list[LieElement], s: list[LieElement],
            t: list[LieElement]) -> LieElement:
    g, n = A.genus, A.punctures
    out = A.zero()
    for i in range(g):
        out = out + A.gen(i).bracket(s[i]) + r[i].bracket(A.gen(g + i))
    for j in range(n):
        out = out + t[j].bracket(A.c_bar(j + 1))
    return out


def f_map(A: GradedLieAlgebra, m: int) -> GradedModuleMap:
    _require_surface(A)
    if m < 1:
        raise ValueError("degree must be >= 1")
    g, n = A.genus, A.punctures
    slots = _layout(A, m)
    cols = []
    hi, lo = A.basis(m + 1), A.basis(m)
    for i in range(g):  # r_i slots
        for x in hi:
            cols.append(A.coordinates(x.bracket(A.gen(g + i)), m + 2))
    for i in range(g):  # s_i slots
        for x in hi:
            cols.append(A.coordinates(A.gen(i).bracket(x), m + 2))
    for j in range(1, n + 1):
        c = A.c_bar(j)
        for x in lo:
            cols.append(A.coordinates(x.bracket(c), m + 2))
    target = [f"gr{m + 2}[{k}]" for k in range(A.rank(m + 2))]
    rows = lattice.transpose(cols, len(target)) if cols else [[] for _ in target]
    return GradedModuleMap(f"f_{m}", rows, _labels(slots), target)


def _is_zero_product(F: GradedModuleMap, G: GradedModuleMap) -> bool:
    if F.shape[1] != G.shape[0]:
        raise ValueError("shape mismatch")
    if 0 in F.shape or 0 in G.shape:
        return True
    P = F.sparse() @ G.sparse()
    return P.count_nonzero() == 0


def formula_rank(A: GradedLieAlgebra, m: int) -> int:
    """2g r_{m+1} + (n-1) r_m - r_{m+2}"""
    g, n = A.genus, A.punctures
    return 2 * g * A.rank(m + 1) + (n - 1) * A.rank(m) - A.rank(m + 2)


@dataclass
class ExactnessReport:
    genus: int
    punctures: int
    degree: int
    fg_zero: bool
    g_injective: bool
    g_rank: int
    g_torsion: list[int]
    f_rank: int
    f_target_rank: int
    f_surjective_Q: bool
    f_cokernel_torsion: list[int]
    ker_f_rank: int
    out_rank: int
    out_torsion: list[int]
    formula_rank: int
    maps: tuple[GradedModuleMap, GradedModuleMap] | None = field(
        default=None, repr=False, compare=False)

    @property
    def formula_agrees(self) -> bool:
        return self.out_rank == self.formula_rank

    @property
    def exact(self) -> bool:
        return self.fg_zero and self.g_injective and self.f_surjective_Q

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "maps"}
        d["formula_agrees"] = self.formula_agrees
        d["exact"] = self.exact
        return d


def verify_exactness(A: GradedLieAlgebra, m: int, torsion: bool = True) -> ExactnessReport:
    G, F = g_map(A, m), f_map(A, m)
    fg_zero = _is_zero_product(F, G)
    g_rank, f_rank = G.rank, F.rank
    src = G.shape[1]
    ker_f = F.shape[1] - f_rank
    return ExactnessReport(
        genus=A.genus, punctures=A.punctures, degree=m,
        fg_zero=fg_zero,
        g_injective=g_rank == src,
        g_rank=g_rank,
        g_torsion=G.cokernel_torsion if torsion else [],
        f_rank=f_rank,
        f_target_rank=F.shape[0],
        f_surjective_Q=f_rank == F.shape[0],
        f_cokernel_torsion=F.cokernel_torsion if torsion else [],
        ker_f_rank=ker_f,
        out_rank=ker_f - g_rank,
        # im g sits inside the saturated lattice ker f, so the torsion of
        # ker f / im g is the torsion of coker g
        out_torsion=G.cokernel_torsion if torsion else [],
        formula_rank=formula_rank(A, m),
        maps=(G, F),
    )


@dataclass
class OutGradedPiece:
    degree: int
    rank: int
    torsion: list[int]
    ker_f_rank: int
    im_g_rank: int
    basis: list[list[int]] = field(repr=False)
    labels: list[str] = field(repr=False)


def _complement(A: GradedLieAlgebra, G: GradedModuleMap) -> list[list[int]] | None:
    """Columns (as rows) spanning a complement of im g; needs torsion-free coker g.

    Returns None in the punctured case, where the complement is simply the
    coordinates with t_n = 0 (the last t-slot of g(x) is x itself).
    """
    N, k = G.shape
    if not A.closed:
        return None
    S = lattice.smith_form(G.matrix, k)
    if S.torsion:
        raise QuotientUnavailable(f"coker g has torsion {S.torsion}")
    import flint
    Uinv = flint.fmpz_mat(S.U).inv().tolist()
    return [[int(Uinv[i][j]) for i in range(N)] for j in range(S.rank, N)]


def out_graded_piece(A: GradedLieAlgebra, m: int, report: ExactnessReport | None = None
                     ) -> OutGradedPiece:
    """ker of f on the quotient by im g, with an explicit lattice basis."""
    report = report or verify_exactness(A, m)
    if not (report.fg_zero and report.g_injective):
        raise ExactnessFailed(f"exactness fails at degree {m}")
    G, F = report.maps if report.maps else (g_map(A, m), f_map(A, m))
    N, k = G.shape
    C = _complement(A, G)
    if C is None:
        width = N - k
        Fbar = [row[:width] for row in F.matrix]
        ker = lattice.kernel_basis(Fbar, width) if width else []
        basis = [v + [0] * k for v in ker]
    elif C:
        Ct = sparse.csr_matrix(np.array(C, dtype=object).T.astype(np.int64))
        Fbar = (F.sparse() @ Ct).toarray().tolist() if F.shape[0] else []
        ker = lattice.kernel_basis(Fbar, len(C))
        basis = []
        for v in ker:
            w = [0] * N
            for j, x in enumerate(v):
                if x:
                    for i, c in enumerate(C[j]):
                        if c:
                            w[i] += x * c
            basis.append(w)
    else:
        basis = []
    return OutGradedPiece(m, len(basis), report.out_torsion, report.ker_f_rank,
                          report.g_rank, basis, G.target)


# -- Johnson-type classes --------------------------------------------------------

@dataclass
class JohnsonClass:
    depth: int | float
    vector: list[int] | None = None
    layout: list[str] | None = None
    in_kernel: bool | None = None
    inner_part: list[int] | None = None

    @property
    def zero_in_out(self) -> bool | None:
        return None if self.vector is None else self.inner_part is not None


def _lead(w: Word, A: GradedLieAlgebra, degree: int, bound: int) -> LieElement:
    """Degree-``degree`` part of the Magnus expansion of w (zero if deeper)."""
    if not w:
        return A.zero()
    d, terms = filtration_depth(w, A.weights, bound)
    if d < degree:
        raise ValueError("element is shallower than expected")
    return LieElement(A, terms) if d == degree else A.zero()


def johnson_depth(phi: GroupMap, bound: int = DEFAULT_BOUND) -> int | float:
    """min over free generators x of depth(phi(x) x^-1) - weight(x)."""
    P = phi.presentation
    best: int | float = math.inf
    for i in range(P.free_rank):
        z = phi.images[i] * Word.gen(i).inverse()
        if not z:
            continue
        d, _ = filtration_depth(z, P.weights, bound)
        best = min(best, d - P.weight(i))
    return best


def _solve_bracket(A: GradedLieAlgebra, c: LieElement, target: LieElement, m: int) -> list[int]:
    """Coordinates of t in gr^m with [t, c] = target (c of degree 2)."""
    cols = [A.coordinates(x.bracket(c), m + 2) for x in A.basis(m)]
    M = lattice.transpose(cols, A.rank(m + 2))
    b = A.coordinates(target, m + 2)
    try:
        x = lattice.solve_rational_unique(M, b, len(cols))
    except ValueError:
        x = lattice.solve_integer(M, b, len(cols))
    if x is None:
        raise ValueError("puncture image is not a graded conjugate of the puncture")
    return x


def solve_modulo_centralizers(A: GradedLieAlgebra, m: int, vec: Sequence[int],
                              G: GradedModuleMap | None = None
                              ) -> tuple[list[int], list[int]] | None:
    """Solve ``g_m(x) = vec`` with each t-slot read modulo the centralizer of c_j.

    A puncture slot only records t_j through [t_j, c_j], so t_j is defined up
    to elements commuting with c_j (in degree 2 that is c_j itself). Returns
    ``(x, representative)`` where the representative is the adjusted class
    vector equal to g_m(x), or None when no choice lands in the image.
    """
    G = G or g_map(A, m)
    g, n = A.genus, A.punctures
    N, rm = len(vec), A.rank(m)
    offset = N - n * rm
    extra: list[list[int]] = []
    for j in range(1, n + 1):
        cols = [A.coordinates(x.bracket(A.c_bar(j)), m + 2) for x in A.basis(m)]
        M = lattice.transpose(cols, A.rank(m + 2))
        for kv in lattice.kernel_basis(M, rm) if cols else []:
            col = [0] * N
            col[offset + (j - 1) * rm: offset + j * rm] = kv
            extra.append(col)
    k = G.shape[1]
    cols = [G.column(i) for i in range(k)] + extra
    if not cols:
        return ([], list(vec)) if not any(vec) else None
    sol = lattice.solve_integer(lattice.transpose(cols, N), vec, len(cols))
    if sol is None:
        return None
    x = sol[:k]
    return x, G.apply(x)


def johnson_class(phi: GroupMap, A: GradedLieAlgebra | None = None,
                  bound: int = DEFAULT_BOUND) -> JohnsonClass:
    """Depth and leading graded class of a braid-type automorphism of a punctured surface."""
    P = phi.presentation
    if P.closed:
        raise ValueError("Johnson classes are computed for punctured surfaces")
    A = A or GradedLieAlgebra.surface(P.genus, P.punctures)
    w = is_braid_type(phi)
    if not w.is_braid:
        raise ValueError(f"not braid type (puncture {w.failing_index})")
    m = johnson_depth(phi, bound)
    if m == math.inf or m + 2 > bound:
        return JohnsonClass(m)
    if m < 1:
        raise NotInFiltration("acts nontrivially on the associated graded")
    g, n = P.genus, P.punctures
    vec: list[int] = []
    r = [_lead(phi.images[i] * Word.gen(i).inverse(), A, m + 1, bound) for i in range(g)]
    s = [_lead(phi.images[g + i] * Word.gen(g + i).inverse(), A, m + 1, bound) for i in range(g)]
    for x in r + s:
        vec += A.coordinates(x, m + 1)
    t_elems = []
    for j in range(1, n + 1):
        c = P.eliminate(P.c(j))
        lead = _lead(phi.apply(c) * c.inverse(), A, m + 2, bound)
        tc = _solve_bracket(A, A.c_bar(j), lead, m)
        vec += tc
        t_elems.append(A.from_coordinates(tc, m))
    in_kernel = f_value(A, r, s, t_elems).is_zero()
    if not in_kernel:
        raise AssertionError("Johnson class is not in ker f")
    G = g_map(A, m)
    solved = solve_modulo_centralizers(A, m, vec, G)
    return JohnsonClass(m, vec, G.target, in_kernel, solved[0] if solved else None)


# -- Dehn-Nielsen comparison ------------------------------------------------------

@dataclass
class DehnNielsenReport:
    genus: int
    punctures: int
    degree: int
    source_rank: int
    target_rank: int
    image_rank: int
    lands_in_kernel: bool
    surjective_Q: bool
    matrix: GradedModuleMap = field(repr=False)

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "matrix"}
        return d


def project_to_closed(u: LieElement, X: GradedLieAlgebra) -> LieElement:
    """Kill the puncture letters; a/b letters keep their indices."""
    k = 2 * X.genus
    return LieElement(X, {mono: c for mono, c in u.terms.items() if all(i < k for i in mono)})


def dehn_nielsen_map(X: GradedLieAlgebra, Y: GradedLieAlgebra, m: int,
                     max_degree: int = DEFAULT_BOUND) -> DehnNielsenReport:
    """Map ker f_Y / im g_Y -> ker f_X / im g_X induced by Gr pi(Y) -> Gr pi(X)."""
    if not X.closed or Y.closed or X.genus != Y.genus:
        raise ValueError("need a closed X and a punctured Y of the same genus")
    if m + 2 > max_degree:
        raise QuotientUnavailable(f"degree {m + 2} exceeds the bound {max_degree}")
    g = X.genus
    FY = f_map(Y, m)
    kerY = lattice.kernel_basis(FY.matrix, FY.shape[1])
    hiY = Y.basis(m + 1)
    ry = Y.rank(m + 1)
    cols = []
    for v in kerY:
        col: list[int] = []
        for slot in range(2 * g):
            coords = v[slot * ry:(slot + 1) * ry]
            elem = Y.zero()
            for b, c in zip(hiY, coords):
                if c:
                    elem = elem + c * b
            col += X.coordinates(project_to_closed(elem, X), m + 1)
        cols.append(col)
    GX, FX = g_map(X, m), f_map(X, m)
    N = GX.shape[0]
    Mrows = lattice.transpose(cols, N) if cols else [[] for _ in range(N)]
    M = GradedModuleMap(f"dn_{m}", Mrows, [f"kerY[{k}]" for k in range(len(cols))], GX.target)
    lands = _is_zero_product(FX, M)
    rank_g = GX.rank
    aug = [rm + rg for rm, rg in zip(Mrows, GX.matrix)]
    image_rank = lattice.rank(aug, len(cols) + GX.shape[1]) - rank_g
    target_rank = (FX.shape[1] - FX.rank) - rank_g
    source_rank = len(kerY) - g_map(Y, m).rank
    return DehnNielsenReport(g, Y.punctures, m, source_rank, target_rank, image_rank,
                             lands, image_rank == target_rank, M)



def mod_view(rank: int, torsion: list[int], prime: int, k: int) -> dict:
    """Structure of (Z^rank + sum Z/d) tensored with Z/prime^k."""
    q = prime ** k
    parts = [math.gcd(d, q) for d in torsion]
    return {"modulus": q, "free_rank": rank, "torsion": [p for p in parts if p > 1]}
