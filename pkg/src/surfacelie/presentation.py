"""Plain-text presentation files: a surface header, named maps and relations.

::

    # comments run to the end of the line
    surface g=2 n=0
    map alpha2:
      b1 -> b1^-1
    rel: s1 s3 = s3 s1
    rel: (s1 s2 s3 s4 s5)^6 = 1

Generators not listed in a map block are fixed. A relation side is a
whitespace-separated list of map names with optional ``^k`` exponents, or
``1`` for the identity; ``(word)^k`` repeats a word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .words import GroupMap, SurfacePresentation, Word, WordError

NameWord = tuple[tuple[str, int], ...]

_HEADER = re.compile(r"surface\s+g=(\d+)\s+n=(\d+)\s*$")
_MAP = re.compile(r"map\s+([A-Za-z_][\w]*)\s*:\s*$")
_IMAGE = re.compile(r"([A-Za-z_]\w*)\s*->\s*(.*)$")
_LETTER = re.compile(r"([abc]\d+)(?:\^(-?\d+))?$")
_NAME = re.compile(r"([A-Za-z_]\w*)(?:\^(-?\d+))?$")
_POWER = re.compile(r"\((.*)\)\s*\^\s*(-?\d+)$")


class PresentationError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Relation:
    lhs: NameWord
    rhs: NameWord
    line: int = field(default=0, compare=False)

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.lhs) + sum(abs(e) for _, e in self.rhs)


@dataclass
class PresentationFile:
    genus: int
    punctures: int
    maps: dict[str, dict[str, Word]] = field(default_factory=dict)
    relations: list[Relation] = field(default_factory=list)

    @property
    def presentation(self) -> SurfacePresentation:
        return SurfacePresentation(self.genus, self.punctures)

    def group_maps(self) -> dict[str, GroupMap]:
        P = self.presentation
        return {name: GroupMap.from_dict(P, imgs) for name, imgs in self.maps.items()}


def _tokens(text: str, start: int):
    """``(token, column)`` pairs; columns are 1-based."""
    for m in re.finditer(r"\S+", text):
        yield m.group(0), start + m.start() + 1


def _parse_word(P: SurfacePresentation, text: str, line: int, col: int) -> Word:
    letters: list[int] = []
    if text.strip() == "1":
        return Word()
    for tok, c in _tokens(text, col - 1):
        m = _LETTER.match(tok)
        if not m:
            raise PresentationError(f"bad generator token {tok!r}", line, c)
        e = int(m.group(2)) if m.group(2) is not None else 1
        if e == 0:
            raise PresentationError(f"exponent 0 in {tok!r}", line, c)
        try:
            idx = P.index(m.group(1))
        except WordError:
            raise PresentationError(f"undeclared generator {m.group(1)!r}", line, c) from None
        letters.extend(Word.gen(idx, e).letters)
    return Word(letters)


def _parse_side(text: str, line: int, col: int) -> NameWord:
    stripped = text.strip()
    offset = col + (len(text) - len(text.lstrip()))
    if stripped == "1" or stripped == "":
        if stripped == "":
            raise PresentationError("empty relation side", line, col)
        return ()
    m = _POWER.match(stripped)
    if m:
        k = int(m.group(2))
        if k == 0:
            raise PresentationError("exponent 0", line, offset + m.start(2))
        inner = _parse_side(m.group(1), line, offset + 1)
        if k < 0:
            inner = tuple((n, -e) for n, e in reversed(inner))
        return inner * abs(k)
    out: list[tuple[str, int]] = []
    for tok, c in _tokens(text, col - 1):
        t = _NAME.match(tok)
        if not t:
            raise PresentationError(f"bad map token {tok!r}", line, c)
        e = int(t.group(2)) if t.group(2) is not None else 1
        if e == 0:
            raise PresentationError(f"exponent 0 in {tok!r}", line, c)
        out.append((t.group(1), e))
    return tuple(out)


def parse_presentation(text: str) -> PresentationFile:
    header: PresentationFile | None = None
    P: SurfacePresentation | None = None
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        line = body.strip()
        col = indent + 1
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise PresentationError("expected header 'surface g=<int> n=<int>'", lineno, col)
            header = PresentationFile(int(m.group(1)), int(m.group(2)))
            try:
                P = header.presentation
            except (ValueError, WordError) as exc:
                raise PresentationError(str(exc), lineno, col) from None
            continue
        if line.startswith("surface"):
            raise PresentationError("duplicate surface header", lineno, col)
        m = _MAP.match(line)
        if m:
            current = m.group(1)
            if current in header.maps:
                raise PresentationError(f"map {current!r} declared twice", lineno, col)
            header.maps[current] = {}
            continue
        if line.startswith("rel:"):
            current = None
            rest = body[body.index("rel:") + 4:]
            rest_col = body.index("rel:") + 5
            if rest.count("=") != 1:
                raise PresentationError("relation needs exactly one '='", lineno, rest_col)
            left, right = rest.split("=")
            lhs = _parse_side(left, lineno, rest_col)
            rhs = _parse_side(right, lineno, rest_col + len(left) + 1)
            for name, _ in lhs + rhs:
                if name not in header.maps:
                    raise PresentationError(f"undeclared map {name!r}", lineno,
                                            rest_col + rest.find(name))
            header.relations.append(Relation(lhs, rhs, lineno))
            continue
        m = _IMAGE.match(line)
        if m:
            if current is None:
                raise PresentationError("image line outside a map block", lineno, col)
            gen = m.group(1)
            try:
                idx = P.index(gen)
            except WordError:
                raise PresentationError(f"undeclared generator {gen!r}", lineno, col) from None
            if idx >= P.free_rank:
                raise PresentationError(f"{gen} is derived and cannot be assigned", lineno, col)
            if gen in header.maps[current]:
                raise PresentationError(f"{gen} assigned twice in {current}", lineno, col)
            word_col = col + m.start(2)
            header.maps[current][gen] = _parse_word(P, m.group(2), lineno, word_col)
            continue
        raise PresentationError(f"cannot parse {line!r}", lineno, col)
    if header is None:
        raise PresentationError("empty presentation file", 1, 1)
    return header


def _format_side(side: NameWord) -> str:
    if not side:
        return "1"
    return " ".join(n if e == 1 else f"{n}^{e}" for n, e in side)


def emit_presentation(pf: PresentationFile) -> str:
    P = pf.presentation
    lines = [f"surface g={pf.genus} n={pf.punctures}"]
    for name, imgs in pf.maps.items():
        lines.append(f"map {name}:")
        for gen in P.names:
            if gen in imgs:
                lines.append(f"  {gen} -> {P.format_word(imgs[gen])}")
    for rel in pf.relations:
        lines.append(f"rel: {_format_side(rel.lhs)} = {_format_side(rel.rhs)}")
    return "\n".join(lines) + "\n"


def from_group_maps(maps: dict[str, GroupMap], relations: list[Relation] | None = None
                    ) -> PresentationFile:
    """Presentation file listing the non-fixed generator images of each map."""
    P = next(iter(maps.values())).presentation
    out = PresentationFile(P.genus, P.punctures)
    for name, phi in maps.items():
        out.maps[name] = {P.names[i]: w for i, w in enumerate(phi.images) if w != Word.gen(i)}
    out.relations = list(relations or [])
    return out
