import sys
import random

import pytest
from hypothesis import strategies as st

from surfacelie.words import GroupMap, SurfacePresentation, Word

SURFACES = [(1, 1), (0, 3), (0, 4), (1, 2), (2, 1)]


def random_word(rng: random.Random, rank: int, max_len: int = 10) -> Word:
    return Word([rng.choice((1, -1)) * rng.randint(1, rank)
                 for _ in range(rng.randint(0, max_len))])


def words(rank: int, max_len: int = 12):
    letter = st.integers(1, rank).flatmap(lambda i: st.sampled_from([i, -i]))
    return st.lists(letter, max_size=max_len).map(Word)


def partial_conjugation(P: SurfacePresentation, i: int, w: Word) -> GroupMap:
    """x_i -> w x_i w^-1 with w free of x_i; an automorphism of the free group."""
    assert all(abs(x) - 1 != i for x in w.letters)
    imgs = [Word.gen(k) for k in range(P.free_rank)]
    imgs[i] = w * Word.gen(i) * w.inverse()
    return GroupMap(P, tuple(imgs))


def nielsen_moves(P: SurfacePresentation) -> list[GroupMap]:
    """Elementary transvections x_i -> x_i x_j^{+-1} and inversions."""
    out = []
    r = P.free_rank
    for i in range(r):
        for j in range(r):
            if i != j:
                for e in (1, -1):
                    imgs = [Word.gen(k) for k in range(r)]
                    imgs[i] = Word.gen(i) * Word.gen(j, e)
                    out.append(GroupMap(P, tuple(imgs)))
    return out


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
