"""``lmcalc`` command line.

Exit codes: 0 success, 1 check or lemma failure, 2 usage or parse error,
3 inconclusive (fuel exhausted).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Optional

from . import lemmas
from .corpus import CorpusSpec, enumerate_typed_terms, random_typed_term
from .reduction import (
    DEFAULT_FUEL, PRESETS, Loop, SN, NotStronglyNormalizing, Unknown, normalize, redexes,
    reduction_graph, sn_verdict,
)
from .reduction import eta as eta_of
from .syntax import (
    Context, Mode, ParseError, parse_context, parse_equations, parse_term, parse_type,
    print_context, print_term, print_type,
)
from .terms import Sort, all_names
from .translate import (
    TranslationEnv, TranslationError, circle, circle_context, circle_typed, diamond,
    diamond_context,
)
from .typecheck import System, TypingError, check, infer
from .types import EquationError, congruent, is_good

OK, FAIL, USAGE, INCONCLUSIVE = 0, 1, 2, 3

SORTS = {"lambda": Sort.LAMBDA, "lambdamu": Sort.LAMBDA_MU, "full": Sort.FULL}
SYSTEMS = {s.value.lower(): s for s in System}


def _text(arg: str) -> str:
    """An argument is read as a file when such a file exists, else taken inline."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _eqs(args):
    return parse_equations(_text(args.eqs)) if getattr(args, "eqs", None) else None


def _ctx(args) -> Context:
    return parse_context(_text(args.ctx)) if getattr(args, "ctx", None) else Context()


def _term(args, text=None):
    mode = Mode(args.mode) if getattr(args, "mode", None) else Mode.CURRY
    return parse_term(_text(text if text is not None else args.term), Sort.FULL, mode)


def _system(args) -> System:
    if args.system:
        return SYSTEMS[args.system.lower()]
    return System.SFULL


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, out) -> int:
    ctx, m, a = _ctx(args), _term(args), parse_type(_text(args.type))
    try:
        d = check(ctx, m, a, _system(args), _eqs(args))
    except TypingError as exc:
        print(f"ill-typed: {exc}", file=out)
        return FAIL
    print(d.pretty() if args.derivation else f"ok: {print_term(m)} : {print_type(a)}", file=out)
    return OK


def cmd_infer(args, out) -> int:
    try:
        a = infer(_ctx(args), _term(args), _system(args), _eqs(args))
    except TypingError as exc:
        print(f"ill-typed: {exc}", file=out)
        return FAIL
    print(print_type(a), file=out)
    return OK


def cmd_reduce(args, out) -> int:
    m = _term(args)
    rs = PRESETS[args.rules]
    tr = normalize(m, rs, args.fuel, _eqs(args))
    if args.format == "lines":
        print(f"start\t{print_term(m)}", file=out)
    else:
        print(f"0: {print_term(m)}", file=out)
    print(tr.format(args.format), file=out)
    if redexes(tr.end, rs):
        print("fuel exhausted before a normal form", file=out)
        return INCONCLUSIVE
    return OK


def cmd_graph(args, out) -> int:
    g = reduction_graph(_term(args), PRESETS[args.rules], args.fuel, _eqs(args))
    index = {k: i for i, k in enumerate(g.nodes)}
    for k, t in g.nodes.items():
        if args.format == "lines":
            print(f"node\t{index[k]}\t{print_term(t)}", file=out)
        else:
            print(f"[{index[k]}] {print_term(t)}", file=out)
    for k, edges in g.edges.items():
        for e in edges:
            path = ".".join(map(str, e.path)) or "root"
            if args.format == "lines":
                print(f"edge\t{index[k]}\t{index[e.target]}\t{e.label}\t{path}", file=out)
            else:
                print(f"[{index[k]}] --{e.label}@{path}--> [{index[e.target]}]", file=out)
    cyc = g.find_cycle()
    summary = f"nodes={len(g)} complete={'yes' if g.complete else 'no'} cycle={'yes' if cyc else 'no'}"
    print(summary.replace(" ", "\t") if args.format == "lines" else summary, file=out)
    return OK if g.complete else INCONCLUSIVE


def cmd_eta(args, out) -> int:
    try:
        v = eta_of(_term(args), PRESETS[args.rules], args.fuel, _eqs(args))
    except NotStronglyNormalizing as exc:
        print("cycle: eta is undefined", file=out)
        print(exc.cycle.format(args.format), file=out)
        return FAIL
    if isinstance(v, Unknown):
        print(f"unknown (fuel spent: {v.fuel_spent})", file=out)
        return INCONCLUSIVE
    print(v, file=out)
    return OK


def cmd_sn(args, out) -> int:
    v = sn_verdict(_term(args), PRESETS[args.rules], args.fuel, _eqs(args))
    if isinstance(v, SN):
        print(f"SN eta={v.eta}", file=out)
        return OK
    if isinstance(v, Loop):
        print("loop", file=out)
        print(v.cycle.format(args.format), file=out)
        return FAIL
    print(f"unknown (fuel spent: {v.fuel_spent})", file=out)
    return INCONCLUSIVE


def cmd_translate(args, out) -> int:
    ctx = _ctx(args)
    if args.map == "diamond":
        m = parse_term(_text(args.term), Sort.LAMBDA_MU, Mode.CHURCH)
        env = TranslationEnv(all_names(m) | set(ctx.term_map) | set(ctx.mu_map))
        print(print_term(diamond(m, env)), file=out)
        if args.ctx:
            print(f"context: {print_context(diamond_context(ctx, env))}", file=out)
        return OK
    m = _term(args)
    if args.type:
        try:
            img = circle_typed(ctx, m, parse_type(_text(args.type)), _eqs(args))
        except TypingError as exc:
            print(f"ill-typed: {exc}", file=out)
            return FAIL
    else:
        img = circle(m)
    print(print_term(img), file=out)
    if args.ctx:
        print(f"context: {print_context(circle_context(ctx))}", file=out)
    return OK


def cmd_good(args, out) -> int:
    g = is_good(parse_equations(_text(args.eqs)))
    print(g.describe(), file=out)
    return OK if g.good else FAIL


def cmd_congruent(args, out) -> int:
    a, b = parse_type(_text(args.left)), parse_type(_text(args.right))
    if congruent(a, b, _eqs(args)):
        print("congruent", file=out)
        return OK
    print("not congruent", file=out)
    return FAIL


def cmd_verify(args, out) -> int:
    rep = lemmas.verify(args.lemma, SORTS[args.sort], args.max_size, args.seed, args.count,
                        args.fuel, _eqs(args))
    if args.format == "lines":
        print(f"report\t{rep.lemma}\t{rep.tried}\t{rep.passed}\t{len(rep.failures)}\t"
              f"{rep.inconclusive}", file=out)
        for f in rep.failures:
            fields = "\t".join(f"{k}={v}" for k, v in f.inputs.items())
            print(f"failure\t{f.lemma}\t{fields}\t{f.reason}", file=out)
    else:
        print(rep.summary(), file=out)
        for f in rep.failures[:args.show]:
            print(f"  {f}", file=out)
        if len(rep.failures) > args.show:
            print(f"  ... {len(rep.failures) - args.show} more", file=out)
    if rep.failures:
        return FAIL
    return INCONCLUSIVE if rep.inconclusive else OK


def cmd_corpus(args, out) -> int:
    sort = SORTS[args.sort]
    atoms = tuple(args.atoms.split(","))
    if args.random:
        rng = random.Random(args.seed)
        items = [random_typed_term(rng, sort, atoms, depth=args.max_size)
                 for _ in range(args.random)]
    else:
        items = enumerate_typed_terms(CorpusSpec(sort=sort, max_size=args.max_size,
                                                 atoms=atoms, eqs=_eqs(args),
                                                 mode=Mode(args.mode)))
    n = 0
    for ctx, m, a in items:
        n += 1
        if args.format == "lines":
            print(f"item\t{print_context(ctx)}\t{print_term(m)}\t{print_type(a)}", file=out)
        else:
            print(f"{ctx} |- {print_term(m)} : {print_type(a)}", file=out)
    if args.format != "lines":
        print(f"{n} terms", file=out)
    return OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lmcalc", description=(
        "Typed lambda, lambda-mu and lambda-mu with conjunction and disjunction: "
        "typing, reduction, translations and lemma checks."))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, term=True, rules=False):
        if term:
            sp.add_argument("term", help="term text or a file containing it")
        sp.add_argument("--eqs", help="equation set, inline or a file")
        sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("text", "lines"), default="text")
        sp.add_argument("--mode", choices=("church", "curry"), default="curry")
        if rules:
            sp.add_argument("--rules", choices=sorted(PRESETS), default="full")

    sp = sub.add_parser("check", help="typecheck a term against a type")
    common(sp)
    sp.add_argument("type")
    sp.add_argument("--ctx", help="context, inline (entries separated by ;) or a file")
    sp.add_argument("--system", choices=sorted(SYSTEMS))
    sp.add_argument("--derivation", action="store_true", help="print the derivation tree")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("infer", help="synthesise the type of an annotated term")
    common(sp)
    sp.add_argument("--ctx")
    sp.add_argument("--system", choices=sorted(SYSTEMS))
    sp.set_defaults(func=cmd_infer)

    for name, func, text in (("reduce", cmd_reduce, "leftmost-outermost reduction trace"),
                             ("graph", cmd_graph, "reduction graph"),
                             ("eta", cmd_eta, "length of the longest reduction"),
                             ("sn", cmd_sn, "strong normalization verdict")):
        sp = sub.add_parser(name, help=text)
        common(sp, rules=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("translate", help="diamond (lambda-mu to lambda) or circle translation")
    common(sp)
    sp.add_argument("--map", choices=("diamond", "circle"), required=True)
    sp.add_argument("--ctx")
    sp.add_argument("--type", help="for circle: annotate the image from a typing at this type")
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("good", help="decide goodness of an equation set")
    sp.add_argument("--eqs", required=True)
    sp.set_defaults(func=cmd_good)

    sp = sub.add_parser("congruent", help="decide congruence of two types modulo equations")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--eqs")
    sp.set_defaults(func=cmd_congruent)

    sp = sub.add_parser("verify", help="run a lemma check")
    sp.add_argument("lemma", choices=lemmas.LEMMA_IDS)
    common(sp, term=False)
    sp.add_argument("--sort", choices=sorted(SORTS), default="full")
    sp.add_argument("--max-size", type=int, default=4)
    sp.add_argument("--count", type=int, default=0, help="extra random samples")
    sp.add_argument("--show", type=int, default=10, help="failures to print")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("corpus", help="list a typed corpus")
    common(sp, term=False)
    sp.add_argument("--sort", choices=sorted(SORTS), default="lambda")
    sp.add_argument("--max-size", type=int, default=4)
    sp.add_argument("--atoms", default="A")
    sp.add_argument("--random", type=int, default=0, help="sample this many random terms")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (ParseError, EquationError, TranslationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
