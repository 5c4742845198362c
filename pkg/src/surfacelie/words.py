"""Free-group words, surface presentations and endomorphisms.

Letters are signed integers: generator ``i`` (0-based) is ``i + 1`` and its
inverse is ``-(i + 1)``. Generators of a genus-g surface with n punctures are
ordered ``a1..ag, b1..bg, c1..cn``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class WordError(ValueError):
    pass


class NotSurjective(Exception):
    pass


class RelatorNotPreserved(Exception):
    pass


class NonUnimodularAbelianization(Exception):
    pass


class NotSimilitude(Exception):
    pass


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise WordError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word, immutable and hashable."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        object.__setattr__(self, "letters", _reduce(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, index: int, exponent: int = 1) -> "Word":
        """``x_index ** exponent`` for a 0-based generator index."""
        x = index + 1 if exponent > 0 else -(index + 1)
        return cls((x,) * abs(exponent))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, e: int) -> "Word":
        base = self if e >= 0 else self.inverse()
        return Word(base.letters * abs(e))

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"

    def pairs(self) -> list[tuple[int, int]]:
        """The word as (generator index, exponent) pairs."""
        return [(abs(x) - 1, 1 if x > 0 else -1) for x in self.letters]

    def max_index(self) -> int:
        return max((abs(x) - 1 for x in self.letters), default=-1)


IDENTITY = Word()


def free_reduce(w: Word | Iterable[int]) -> Word:
    if isinstance(w, Word):
        return w
    return Word(w)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``.

    This is the convention under which the shipped genus-2 generator tables
    preserve the surface relator. Its Magnus leading term is still
    ``X_u X_v - X_v X_u``.
    """
    return u.inverse() * v.inverse() * u * v


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator * core * conjugator^-1``."""
    t = w.letters
    i, j = 0, len(t) - 1
    while i < j and t[i] == -t[j]:
        i += 1
        j -= 1
    return Word(t[i:j + 1]), Word(t[:i])


def _rotation_index(word: tuple[int, ...], target: tuple[int, ...]) -> int | None:
    """Index i with ``word == target[i:] + target[:i]``, or None."""
    if len(word) != len(target):
        return None
    if not word:
        return 0
    doubled = target + target
    n = len(target)
    for i in range(n):
        if doubled[i:i + n] == word:
            return i
    return None


def conjugate_power(w: Word, target: Word) -> tuple[Word, int] | None:
    """Find ``(u, e)`` with ``e != 0`` and ``w == u * target**e * u^-1``.

    Only rotations of powers of the cyclic core of ``target`` are tried,
    which is complete when that core is not itself a proper power.
    """
    core_t, k = cyclically_reduce(target)
    core_w, conj = cyclically_reduce(w)
    if not core_t or not core_w or len(core_w) % len(core_t):
        return None
    e = len(core_w) // len(core_t)
    for sign in (1, -1):
        big = (core_t ** (sign * e)).letters
        i = _rotation_index(core_w.letters, big)
        if i is None:
            continue
        # big = x y, core_w = y x = x^-1 big x, core_t = k^-1 target k
        x = Word(big[:i])
        u = conj * x.inverse() * k.inverse()
        return u, sign * e
    return None


@dataclass(frozen=True)
class SurfacePresentation:
    """Standard presentation of the genus-g, n-punctured surface group."""

    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise ValueError("genus and punctures must be nonnegative")
        if self.genus == 0 and self.punctures == 0:
            raise ValueError("the sphere has trivial fundamental group")

    @property
    def hyperbolic(self) -> bool:
        return 2 * self.genus - 2 + self.punctures > 0

    @property
    def closed(self) -> bool:
        return self.punctures == 0

    @property
    def num_generators(self) -> int:
        return 2 * self.genus + self.punctures

    @property
    def free_rank(self) -> int:
        """Rank of the free group the computations run in."""
        return 2 * self.genus + max(self.punctures - 1, 0)

    @property
    def names(self) -> list[str]:
        g, n = self.genus, self.punctures
        return ([f"a{i}" for i in range(1, g + 1)] + [f"b{i}" for i in range(1, g + 1)]
                + [f"c{j}" for j in range(1, n + 1)])

    def a(self, i: int) -> Word:
        return Word.gen(i - 1)

    def b(self, i: int) -> Word:
        return Word.gen(self.genus + i - 1)

    def c(self, j: int) -> Word:
        return Word.gen(2 * self.genus + j - 1)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise WordError(f"unknown generator {name!r} for genus {self.genus}, "
                            f"{self.punctures} punctures") from None

    def weight(self, index: int) -> int:
        return 1 if index < 2 * self.genus else 2

    @property
    def weights(self) -> list[int]:
        return [self.weight(i) for i in range(self.free_rank)]

    def relator(self) -> Word:
        """``prod [a_i, b_i] * prod c_j`` over the full generator list."""
        w = IDENTITY
        for i in range(1, self.genus + 1):
            w = w * commutator(self.a(i), self.b(i))
        for j in range(1, self.punctures + 1):
            w = w * self.c(j)
        return w

    def derived_generator(self) -> Word:
        """Word for the last puncture loop in the free basis (n >= 1)."""
        if self.closed:
            raise WordError("closed surface has no derived generator")
        return (self.relator() * self.c(self.punctures).inverse()).inverse()

    def eliminate(self, w: Word) -> Word:
        """Rewrite ``w`` over the free basis by substituting the derived c_n."""
        if self.closed:
            return w
        last = 2 * self.genus + self.punctures - 1
        if w.max_index() < last:
            return w
        d = self.derived_generator()
        dinv = d.inverse()
        out: list[int] = []
        for x in w.letters:
            if abs(x) - 1 == last:
                out.extend((d if x > 0 else dinv).letters)
            else:
                out.append(x)
        return Word(out)

    def parse_word(self, text: str) -> Word:
        """Parse whitespace-separated tokens like ``a1 b1^-1 c2``."""
        letters: list[int] = []
        for tok in text.split():
            m = re.fullmatch(r"([abc]\d+)(?:\^(-?\d+))?", tok)
            if not m:
                raise WordError(f"bad token {tok!r}")
            e = int(m.group(2)) if m.group(2) is not None else 1
            if e == 0:
                raise WordError(f"exponent 0 in token {tok!r}")
            letters.extend(Word.gen(self.index(m.group(1)), e).letters)
        return Word(letters)

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        names = self.names
        parts: list[str] = []
        for x in w.letters:
            name = names[abs(x) - 1]
            if parts and parts[-1][0] == name and (parts[-1][1] > 0) == (x > 0):
                parts[-1] = (name, parts[-1][1] + (1 if x > 0 else -1))
            else:
                parts.append((name, 1 if x > 0 else -1))
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in parts)


def relator_conjugacy_class(w: Word, P: SurfacePresentation) -> int | None:
    """+1 / -1 if ``w`` is conjugate to a rotation of R / R^-1, else None."""
    core, _ = cyclically_reduce(w)
    R, _ = cyclically_reduce(P.relator())
    if _rotation_index(core.letters, R.letters) is not None:
        return 1
    if _rotation_index(core.letters, R.inverse().letters) is not None:
        return -1
    return None


@dataclass(frozen=True)
class GroupMap:
    """Endomorphism given by the images of the free generators.

    For punctured surfaces the images are words in the free basis
    ``a, b, c1..c_{n-1}``; the last puncture loop is derived.
    """

    presentation: SurfacePresentation
    images: tuple[Word, ...]
    inverse_map: "GroupMap | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        P = self.presentation
        if len(self.images) != P.free_rank:
            raise WordError(f"expected {P.free_rank} images, got {len(self.images)}")
        imgs = tuple(P.eliminate(w) for w in self.images)
        for w in imgs:
            if w.max_index() >= P.free_rank:
                raise WordError("image uses a generator outside the free basis")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, P: SurfacePresentation) -> "GroupMap":
        ident = cls(P, tuple(Word.gen(i) for i in range(P.free_rank)))
        object.__setattr__(ident, "inverse_map", ident)
        return ident

    @classmethod
    def from_dict(cls, P: SurfacePresentation, images: dict[str, Word]) -> "GroupMap":
        """Build from ``{generator name: image}``; unlisted generators are fixed."""
        imgs = [Word.gen(i) for i in range(P.free_rank)]
        for name, w in images.items():
            i = P.index(name)
            if i >= P.free_rank:
                raise WordError(f"{name} is the derived generator; it cannot be assigned")
            imgs[i] = w
        return cls(P, tuple(imgs))

    @classmethod
    def inner(cls, P: SurfacePresentation, u: Word) -> "GroupMap":
        """``x -> u x u^-1``."""
        u = P.eliminate(u)
        fwd = cls(P, tuple(u * Word.gen(i) * u.inverse() for i in range(P.free_rank)))
        back = cls(P, tuple(u.inverse() * Word.gen(i) * u for i in range(P.free_rank)))
        object.__setattr__(fwd, "inverse_map", back)
        object.__setattr__(back, "inverse_map", fwd)
        return fwd

    def __call__(self, w: Word) -> Word:
        return self.apply(w)

    def apply(self, w: Word) -> Word:
        P = self.presentation
        w = P.eliminate(w)
        out: list[int] = []
        for x in w.letters:
            i = abs(x) - 1
            if i >= len(self.images):
                raise WordError(f"generator index {i} out of range")
            img = self.images[i]
            out.extend(img.letters if x > 0 else img.inverse().letters)
        return Word(out)

    def compose(self, other: "GroupMap") -> "GroupMap":
        """``self o other``: apply ``other`` first."""
        if other.presentation != self.presentation:
            raise WordError("incompatible presentations")
        res = GroupMap(self.presentation, tuple(self.apply(w) for w in other.images))
        if self.inverse_map is not None and other.inverse_map is not None:
            inv = GroupMap(self.presentation,
                           tuple(other.inverse_map.apply(w) for w in self.inverse_map.images))
            object.__setattr__(res, "inverse_map", inv)
            object.__setattr__(inv, "inverse_map", res)
        return res

    def __mul__(self, other: "GroupMap") -> "GroupMap":
        return self.compose(other)

    def inverse(self) -> "GroupMap":
        if self.inverse_map is None:
            self.with_inverse()
        return self.inverse_map

    def with_inverse(self) -> "GroupMap":
        """Attach an inverse computed by folding; raises NotSurjective."""
        if self.inverse_map is None:
            inv = fold_inverse(self)
            object.__setattr__(self, "inverse_map", inv)
            object.__setattr__(inv, "inverse_map", self)
        return self

    def is_identity(self) -> bool:
        return all(w == Word.gen(i) for i, w in enumerate(self.images))

    def describe(self) -> dict[str, str]:
        P = self.presentation
        return {P.names[i]: P.format_word(w) for i, w in enumerate(self.images)}


# -- Stallings folding ---------------------------------------------------------

class _FoldGraph:
    """Labelled graph for folding; edge labels live in the free group on the images."""

    def __init__(self):
        self.edges: dict[int, list] = {}  # id -> [src, letter > 0, dst, label Word]
        self.inc: dict[int, dict[int, set[int]]] = {0: {}}
        self._next_vertex = 1
        self._next_edge = 0

    def new_vertex(self) -> int:
        v = self._next_vertex
        self._next_vertex += 1
        self.inc[v] = {}
        return v

    def add_edge(self, src: int, letter: int, dst: int, label: Word) -> None:
        if letter < 0:
            src, dst, letter, label = dst, src, -letter, label.inverse()
        e = self._next_edge
        self._next_edge += 1
        self.edges[e] = [src, letter, dst, label]
        self.inc[src].setdefault(letter, set()).add(e)
        self.inc[dst].setdefault(-letter, set()).add(e)

    def _detach(self, e: int) -> None:
        src, x, dst, _ = self.edges[e]
        self.inc[src][x].discard(e)
        self.inc[dst][-x].discard(e)

    def _attach(self, e: int) -> None:
        src, x, dst, _ = self.edges[e]
        self.inc[src].setdefault(x, set()).add(e)
        self.inc[dst].setdefault(-x, set()).add(e)

    def _gauge(self, z: int, g: Word) -> None:
        seen = set()
        for es in self.inc[z].values():
            for e in es:
                if e in seen:
                    continue
                seen.add(e)
                src, _, dst, lab = self.edges[e]
                if src == z:
                    lab = g * lab
                if dst == z:
                    lab = lab * g.inverse()
                self.edges[e][3] = lab

    def _traverse(self, v: int, s: int, e: int) -> tuple[int, Word]:
        src, _, dst, lab = self.edges[e]
        return (dst, lab) if s > 0 else (src, lab.inverse())

    def fold(self) -> None:
        work = list(self.inc)
        while work:
            v = work.pop()
            if v not in self.inc:
                continue
            for s, es in list(self.inc[v].items()):
                if len(es) < 2:
                    continue
                e1, e2 = sorted(es)[:2]
                w1, t1 = self._traverse(v, s, e1)
                w2, t2 = self._traverse(v, s, e2)
                self._detach(e2)
                del self.edges[e2]
                if w1 != w2:
                    if w2 == 0:
                        w1, w2, t1, t2 = w2, w1, t2, t1
                    self._gauge(w2, t1.inverse() * t2)
                    self._merge(w2, w1)
                    work.append(w1)
                work.append(v)
                break

    def _merge(self, old: int, new: int) -> None:
        moved = {e for es in self.inc[old].values() for e in es}
        for e in moved:
            self._detach(e)
            if self.edges[e][0] == old:
                self.edges[e][0] = new
            if self.edges[e][2] == old:
                self.edges[e][2] = new
            self._attach(e)
        del self.inc[old]


def fold_inverse(phi: GroupMap) -> GroupMap:
    """Inverse of a surjective endomorphism of a free group, via folding.

    Surjective endomorphisms of finitely generated free groups are
    automorphisms (Hopfian property), so surjectivity suffices.
    """
    P = phi.presentation
    r = P.free_rank
    G = _FoldGraph()
    for k, img in enumerate(phi.images):
        if not img:
            continue
        v = 0
        for pos, x in enumerate(img.letters):
            last = pos == len(img) - 1
            w = 0 if last else G.new_vertex()
            G.add_edge(v, x, w, Word.gen(k) if pos == 0 else IDENTITY)
            v = w
    G.fold()
    loops = {}
    if len(G.inc) == 1:
        for e, (src, x, dst, lab) in G.edges.items():
            loops[x - 1] = lab
    if len(G.inc) != 1 or len(loops) != r:
        raise NotSurjective("images generate a proper subgroup")
    inv = GroupMap(P, tuple(loops[i] for i in range(r)))
    if not all(phi.apply(inv.images[i]) == Word.gen(i) for i in range(r)):
        raise AssertionError("folding produced an invalid inverse")
    return inv


# -- abelianization -------------------------------------------------------------

def abelianization_matrix(phi: GroupMap, full: bool = False) -> np.ndarray:
    """Integer matrix of the induced map on H_1; column j is the image of generator j.

    By default only the a/b block (closed-surface homology) is returned.
    """
    P = phi.presentation
    size = P.free_rank if full else 2 * P.genus
    M = np.zeros((size, size), dtype=object)
    for j in range(size):
        for x in phi.images[j].letters:
            i = abs(x) - 1
            if i < size:
                M[i, j] += 1 if x > 0 else -1
    return M


def standard_form(genus: int) -> np.ndarray:
    g = genus
    J = np.zeros((2 * g, 2 * g), dtype=object)
    for i in range(g):
        J[i, g + i] = 1
        J[g + i, i] = -1
    return J


def symplectic_class(M: np.ndarray) -> int:
    """Multiplier nu with ``M^T J M = nu J``; raises NotSimilitude."""
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if M.shape != (n, n) or n % 2:
        raise NotSimilitude("matrix must be square of even size")
    J = standard_form(n // 2)
    S = M.T.dot(J).dot(M)
    if n == 0:
        return 1
    nu = S[0, n // 2]
    if not (S == nu * J).all():
        raise NotSimilitude("M^T J M is not a multiple of J")
    return int(nu)


def _det(M: np.ndarray) -> int:
    from .lattice import determinant
    return determinant(M.tolist())


@dataclass
class Certification:
    """Outcome of :func:`certify_automorphism`."""

    method: str
    determinant: int
    orientation: int | None
    multiplier: int | None
    inverse: GroupMap | None

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "determinant": self.determinant,
            "orientation": self.orientation,
            "multiplier": self.multiplier,
            "inverse": self.inverse.describe() if self.inverse is not None else None,
        }


def certify_automorphism(phi: GroupMap) -> Certification:
    P = phi.presentation
    det = _det(abelianization_matrix(phi, full=True))
    try:
        nu = symplectic_class(abelianization_matrix(phi))
    except NotSimilitude:
        nu = None
    if not P.closed:
        inv = fold_inverse(phi)
        object.__setattr__(phi, "inverse_map", inv)
        object.__setattr__(inv, "inverse_map", phi)
        return Certification("stallings-folding", det, nu, nu, inv)
    sign = relator_conjugacy_class(phi.apply(P.relator()), P)
    if sign is None:
        raise RelatorNotPreserved("image of the relator is not conjugate to R or R^-1")
    if abs(det) != 1:
        raise NonUnimodularAbelianization(f"abelianization determinant {det}")
    try:
        phi.with_inverse()
        inv = phi.inverse_map
    except NotSurjective:
        inv = None
    return Certification("relator-conjugacy", det, sign, nu, inv)


@dataclass
class BraidWitness:
    is_braid: bool
    conjugators: list[Word]
    exponents: list[int]
    failing_index: int | None = None


def is_braid_type(phi: GroupMap, P: SurfacePresentation | None = None) -> BraidWitness:
    """Check that every puncture loop goes to a conjugate of a nonzero power of itself."""
    P = P or phi.presentation
    if P.closed:
        raise WordError("braid type needs at least one puncture")
    conj: list[Word] = []
    exps: list[int] = []
    for j in range(1, P.punctures + 1):
        c = P.eliminate(P.c(j))
        found = conjugate_power(phi.apply(c), c)
        if found is None:
            return BraidWitness(False, conj, exps, failing_index=j)
        u, e = found
        conj.append(u)
        exps.append(e)
    return BraidWitness(True, conj, exps)


def inner_conjugator(phi: GroupMap) -> Word | None:
    """``u`` with ``phi(x) = u x u^-1`` for every free generator, or None."""
    P = phi.presentation
    r = P.free_rank
    if r == 0:
        return IDENTITY
    found = conjugate_power(phi.images[0], Word.gen(0))
    if found is None or found[1] != 1:
        return None
    w = found[0]
    if r == 1:
        return w
    # centralizer of x_0 is <x_0>: u = w x_0^k
    z = w.inverse() * phi.images[1] * w
    k = 0
    t = z.letters
    if t and abs(t[0]) == 1:
        s = 1 if t[0] > 0 else -1
        while k < len(t) and t[k] == t[0]:
            k += 1
        k *= s
    for kk in (k, k - 1, k + 1, 0):
        u = w * Word.gen(0, kk) if kk else w
        if all(u * Word.gen(i) * u.inverse() == phi.images[i] for i in range(r)):
            return u
    return None
