"""Command-line front end for the surface group and graded Lie algebra tools.

Every subcommand prints a report with the fields ``command``, ``params``,
``results``, ``failures`` and ``version``. Exit status is 0 when every check
passes, 1 when a mathematical check fails and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Callable

from . import __version__
from .builtin import birman_relations, suzuki_generators
from .derivations import der_mod_inner, ihara_algebra, ihara_injective, ihara_special
from .lie import ClosedAlgebraError, GradedLieAlgebra, witt_ranks
from .magnus import filtration_depth, magnus_expand
from .out import (ExactnessFailed, NotInFiltration, QuotientUnavailable, dehn_nielsen_map,
                  johnson_class, mod_view, out_graded_piece, verify_exactness)
from .presentation import (PresentationError, PresentationFile, Relation,
                           from_group_maps, parse_presentation)
from .relations import UncertifiedMap, certify_all, verify_relation
from .words import (GroupMap, NonUnimodularAbelianization, NotSimilitude, NotSurjective,
                    RelatorNotPreserved, SurfacePresentation, WordError, abelianization_matrix,
                    certify_automorphism, symplectic_class)


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = params
        self.results: list[dict] = []
        self.failures: list[dict] = []

    def add(self, **row) -> dict:
        self.results.append(row)
        return row

    def fail(self, what: str, **detail) -> None:
        self.failures.append({"check": what, **detail})

    def as_dict(self) -> dict:
        return {"command": self.command, "params": self.params, "results": self.results,
                "failures": self.failures, "version": __version__}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2, default=_jsonable)
        lines = [f"{self.command}  " + " ".join(f"{k}={v}" for k, v in self.params.items())]
        for row in self.results:
            lines.append("  " + "  ".join(f"{k}={_short(v)}" for k, v in row.items()))
        for f in self.failures:
            lines.append("FAIL " + "  ".join(f"{k}={_short(v)}" for k, v in f.items()))
        lines.append("ok" if not self.failures else f"{len(self.failures)} failure(s)")
        return "\n".join(lines)


def _jsonable(x):
    if x == math.inf:
        return "inf"
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    return str(x)


def _short(v) -> str:
    s = json.dumps(v, default=_jsonable) if not isinstance(v, str) else v
    return s if len(s) <= 80 else s[:77] + "..."


# -- helpers ----------------------------------------------------------------------

def _algebra(args) -> GradedLieAlgebra:
    if getattr(args, "letters", None):
        return GradedLieAlgebra.free(args.letters)
    if args.genus is None or args.punctures is None:
        raise UsageError("give --genus and --punctures (or --letters)")
    try:
        SurfacePresentation(args.genus, args.punctures)
    except (ValueError, WordError) as exc:
        raise UsageError(str(exc)) from None
    return GradedLieAlgebra.surface(args.genus, args.punctures)


def _params(args, *names) -> dict:
    return {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}


def _mod(args, rank: int, torsion: list[int]) -> dict | None:
    if args.mod_l is None:
        return None
    return mod_view(rank, torsion, args.mod_l, args.k)


def _load(args) -> PresentationFile:
    if args.builtin == "suzuki-g2":
        pf = from_group_maps(suzuki_generators(2))
        if args.input:
            raise UsageError("--builtin suzuki-g2 cannot be combined with --input")
        return pf
    if not args.input:
        raise UsageError("this command needs --input or --builtin")
    text = Path(args.input).read_text(encoding="utf-8")
    pf = parse_presentation(text)
    if args.builtin == "birman-relations":
        for lhs, rhs in (r for fam in birman_relations().values() for r in fam):
            for name, _ in lhs + rhs:
                if name not in pf.maps:
                    raise UsageError(f"Birman relations need a candidate map named {name}")
            pf.relations.append(Relation(lhs, rhs))
    return pf


# -- subcommands --------------------------------------------------------------------

def cmd_ranks(args) -> Report:
    A = _algebra(args)
    rep = Report("ranks", _params(args, "genus", "punctures", "letters", "max_degree"))
    witt = None if A.closed else witt_ranks(A.weights, args.max_degree)
    for m in range(1, args.max_degree + 1):
        row = rep.add(degree=m, rank=A.rank(m))
        if witt is not None:
            row["witt"] = witt[m]
            row["lyndon"] = len(A.lyndon(m))
            if witt[m] != row["lyndon"]:
                rep.fail("witt-lyndon", degree=m)
        else:
            row["torsion"] = A.torsion(m)
        mv = _mod(args, row["rank"], row.get("torsion", []))
        if mv:
            row["mod"] = mv
    return rep


def cmd_basis(args) -> Report:
    A = _algebra(args)
    rep = Report("basis", _params(args, "genus", "punctures", "letters", "max_degree"))
    for m in range(1, args.max_degree + 1):
        if A.closed:
            elems = [b.to_tensor().format(A.names) for b in A.basis(m)]
            rep.add(degree=m, rank=len(elems), basis=elems)
        else:
            rep.add(degree=m, rank=len(A.lyndon(m)),
                    basis=[A.bracketing(w) for w in A.lyndon(m)])
    return rep


def cmd_magnus(args) -> Report:
    if not args.word:
        raise UsageError("magnus needs --word")
    g = args.genus if args.genus is not None else 1
    n = args.punctures if args.punctures is not None else 1
    P = SurfacePresentation(g, n)
    w = P.eliminate(P.parse_word(args.word))
    rep = Report("magnus", {"genus": g, "punctures": n, "word": args.word,
                            "max_degree": args.max_degree})
    p = magnus_expand(w, P.weights, args.max_degree)
    if args.mod_l is not None:
        p = p.mod(args.mod_l ** args.k)
    row = rep.add(expansion=p.format(P.names[:P.free_rank]), terms=len(p.terms))
    if w:
        d, lead = filtration_depth(w, P.weights, args.max_degree)
        row["depth"] = d
        row["leading"] = {"*".join(P.names[i] for i in mono): c
                          for mono, c in sorted(lead.items())}
    else:
        row["depth"] = math.inf
    return rep


def cmd_exactness(args) -> Report:
    A = _algebra(args)
    rep = Report("exactness", _params(args, "genus", "punctures", "max_degree"))
    for m in range(1, args.max_degree + 1):
        r = verify_exactness(A, m)
        row = rep.add(**r.as_dict())
        for key in ("fg_zero", "g_injective", "f_surjective_Q", "formula_agrees"):
            if not row[key]:
                rep.fail(key, degree=m)
    return rep


def cmd_out_ranks(args) -> Report:
    A = _algebra(args)
    rep = Report("out-ranks", _params(args, "genus", "punctures", "max_degree", "mod_l", "k"))
    for m in range(1, args.max_degree + 1):
        r = verify_exactness(A, m)
        try:
            piece = out_graded_piece(A, m, r)
        except (ExactnessFailed, QuotientUnavailable) as exc:
            rep.fail("out-piece", degree=m, reason=str(exc))
            continue
        row = rep.add(degree=m, rank=piece.rank, torsion=piece.torsion,
                      ker_f_rank=piece.ker_f_rank, im_g_rank=piece.im_g_rank,
                      formula_rank=r.formula_rank)
        if piece.rank != r.formula_rank:
            rep.fail("formula", degree=m)
        mv = _mod(args, piece.rank, piece.torsion)
        if mv:
            row["mod"] = mv
    return rep


def cmd_der_ranks(args) -> Report:
    A = ihara_algebra(args.weights) if args.genus is None and not args.letters else _algebra(args)
    if A.closed:
        raise UsageError("derivation ranks need a free algebra (punctures >= 1)")
    rep = Report("der-ranks", _params(args, "genus", "punctures", "letters", "weights",
                                      "max_degree"))
    for i in range(1, args.max_degree + 1):
        rep.add(**der_mod_inner(A, i).as_dict())
    return rep


def cmd_ihara(args) -> Report:
    A = ihara_algebra(args.weights)
    rep = Report("ihara", _params(args, "weights", "max_degree"))
    for m in range(1, args.max_degree + 1):
        basis = A.basis(m)
        if not basis:
            continue
        zero = [A.bracketing(w) for w, f in zip(A.lyndon(m), basis)
                if ihara_special(f).images[1].is_zero()]
        row = rep.add(degree=m, lyndon=len(basis), injective=ihara_injective(A, m),
                      vanishing=zero)
        if not row["injective"]:
            rep.fail("ihara-injective", degree=m, vanishing=zero)
    return rep


def cmd_check_aut(args) -> Report:
    pf = _load(args)
    rep = Report("check-aut", {"genus": pf.genus, "punctures": pf.punctures,
                               "source": args.builtin or args.input})
    for name, phi in pf.group_maps().items():
        try:
            cert = certify_automorphism(phi)
        except (NotSurjective, RelatorNotPreserved, NonUnimodularAbelianization) as exc:
            rep.add(map=name, certified=False, error=type(exc).__name__, detail=str(exc))
            rep.fail("certify", map=name, error=type(exc).__name__)
            continue
        row = rep.add(map=name, certified=True, **cert.as_dict())
        try:
            row["similitude"] = symplectic_class(abelianization_matrix(phi))
        except NotSimilitude:
            row["similitude"] = None
            rep.fail("similitude", map=name)
    return rep


def cmd_johnson(args) -> Report:
    pf = _load(args)
    if pf.punctures == 0:
        raise UsageError("johnson classes are computed for punctured surfaces")
    A = GradedLieAlgebra.surface(pf.genus, pf.punctures)
    rep = Report("johnson", {"genus": pf.genus, "punctures": pf.punctures,
                             "max_degree": args.max_degree, "source": args.input})
    for name, phi in pf.group_maps().items():
        try:
            certify_automorphism(phi)
            jc = johnson_class(phi, A, bound=args.max_degree)
        except (NotSurjective, NotInFiltration, ValueError) as exc:
            rep.add(map=name, error=type(exc).__name__, detail=str(exc))
            rep.fail("johnson", map=name, error=type(exc).__name__)
            continue
        rep.add(map=name, depth=jc.depth, vector=jc.vector, in_kernel=jc.in_kernel,
                zero_in_out=jc.zero_in_out, inner_part=jc.inner_part)
    return rep


def cmd_verify_relations(args) -> Report:
    pf = _load(args)
    P = pf.presentation
    maps = pf.group_maps()
    rep = Report("verify-relations", {"genus": pf.genus, "punctures": pf.punctures,
                                      "level": args.max_degree,
                                      "source": args.input or args.builtin})
    try:
        certify_all(maps)
    except UncertifiedMap as exc:
        rep.fail("uncertified", detail=str(exc))
        return rep
    A = GradedLieAlgebra.surface(pf.genus, pf.punctures)
    for k, rel in enumerate(pf.relations, start=1):
        v = verify_relation(maps, rel.lhs, rel.rhs, P, args.max_degree,
                            name=f"rel{k}", A=A)
        row = rep.add(**v.as_dict())
        row["line"] = rel.line or None
        if not v.ok:
            rep.fail("relation", name=v.name, status=v.status)
    return rep


def cmd_dehn_nielsen(args) -> Report:
    g = args.genus if args.genus is not None else 1
    n = args.punctures if args.punctures is not None else 1
    if n < 1:
        raise UsageError("dehn-nielsen needs --punctures >= 1 for the source surface")
    X, Y = GradedLieAlgebra.surface(g, 0), GradedLieAlgebra.surface(g, n)
    rep = Report("dehn-nielsen", {"genus": g, "punctures": n, "max_degree": args.max_degree})
    for m in range(1, args.max_degree - 1):
        try:
            d = dehn_nielsen_map(X, Y, m, max_degree=args.max_degree)
        except QuotientUnavailable as exc:
            rep.fail("quotient", degree=m, reason=str(exc))
            continue
        rep.add(**d.as_dict())
        if not d.surjective_Q:
            rep.fail("surjective", degree=m)
        if not d.lands_in_kernel:
            rep.fail("lands-in-kernel", degree=m)
    return rep


COMMANDS: dict[str, Callable] = {
    "ranks": cmd_ranks,
    "basis": cmd_basis,
    "magnus": cmd_magnus,
    "exactness": cmd_exactness,
    "out-ranks": cmd_out_ranks,
    "der-ranks": cmd_der_ranks,
    "ihara": cmd_ihara,
    "johnson": cmd_johnson,
    "check-aut": cmd_check_aut,
    "verify-relations": cmd_verify_relations,
    "dehn-nielsen": cmd_dehn_nielsen,
}


HELP = {
    "ranks": "Witt ranks and Lyndon counts per degree",
    "basis": "Lyndon basis with standard bracketings",
    "magnus": "truncated Magnus expansion and filtration depth of --word",
    "exactness": "f o g = 0, injectivity of g and surjectivity of f per degree",
    "out-ranks": "ranks and torsion of the graded braid-type Out pieces",
    "der-ranks": "ranks of derivations, inner derivations and their quotient",
    "ihara": "injectivity of f -> D_f on each degree",
    "johnson": "depth and graded class of the maps in --input",
    "check-aut": "certify the maps in --input or --builtin as automorphisms",
    "verify-relations": "decide the relations of --input in Out, level by level",
    "dehn-nielsen": "graded comparison map from punctured to closed surface",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=int)
    common.add_argument("--punctures", type=int)
    common.add_argument("--letters", type=int, help="free alphabet of weight-1 letters")
    common.add_argument("--max-degree", type=int, default=6)
    common.add_argument("--weights", choices=["xy", "surface"], default="xy")
    common.add_argument("--mod-l", type=int, help="prime for the mod l^k view")
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--input", help="presentation file")
    common.add_argument("--builtin", choices=["suzuki-g2", "birman-relations"])
    common.add_argument("--word", help="word for the magnus subcommand, e.g. 'a1 b1^-1'")

    parser = argparse.ArgumentParser(prog="surfacelie", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_degree < 1:
        parser.error("--max-degree must be positive")
    try:
        rep = COMMANDS[args.command](args)
    except (UsageError, PresentationError, WordError, ClosedAlgebraError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(rep.render(args.format))
    return 1 if rep.failures else 0


if __name__ == "__main__":
    sys.exit(main())
