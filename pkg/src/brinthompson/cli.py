"""Command line entry point.

JSON reports go to stdout (or ``--out``), a one-line summary to stderr.
Exit status: 0 on success, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import checks
from .analysis import algebraically_disjoint, ball, check_alg_supp, replay_counterexample
from .clopen import parse_clopen
from .embeddings import (
    EmbeddingSpec,
    NoWitness,
    check_anchor,
    check_full_support,
    check_local_regularity,
    push_forward,
    witness_local_density,
)
from .limits import rho_eval
from .serialize import (
    InputError,
    clopen_to_list,
    dump_json,
    element_from_dict,
    generators_from_dict,
    load_json,
    table_from_dict,
    table_to_dict,
)
from .tables import (
    TableError,
    apply,
    commutes,
    compose,
    fixed_locus,
    invert,
    localize,
    rsupp,
    validate,
)
from .words import SignatureMismatch, format_point, format_word, parse_point, parse_tuple

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class CheckFailed(Exception):
    pass


def _element(path, sig=None):
    return element_from_dict(load_json(path), sig)


def _spec(path) -> EmbeddingSpec:
    try:
        return EmbeddingSpec.from_dict(load_json(path))
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed embedding spec ({exc})") from None


def _positive(name):
    def conv(s):
        n = int(s)
        if n < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return n
    return conv


def _nonneg(s):
    n = int(s)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


# -- table commands ---------------------------------------------------------------

def cmd_validate(args):
    t = table_from_dict(load_json(args.table))
    validate(t)
    return {"valid": True, "rows": len(t.rows), "signature": list(t.signature.sizes)}, "valid table"


def cmd_compose(args):
    a, b = _element(args.a), _element(args.b)
    c = compose(a, b)
    return table_to_dict(c), f"composed table has {len(c.rows)} rows"


def cmd_invert(args):
    return table_to_dict(invert(_element(args.table))), "inverted"


def cmd_apply(args):
    e = _element(args.table)
    p = parse_point(args.point, e.signature)
    q = apply(e, p)
    return {"point": format_point(p, e.signature), "image": format_point(q, e.signature)}, \
        f"{format_point(p)} -> {format_point(q)}"


def cmd_rsupp(args):
    e = _element(args.table)
    sup = rsupp(e, side=args.side)
    loci = []
    for locus in fixed_locus(e):
        loci.append({"row": locus.row,
                     "factors": [f.kind if f.kind != "point" else
                                 f"{format_word(f.point[0])}({format_word(f.point[1])})"
                                 for f in locus.factors]})
    return {"rsupp": clopen_to_list(sup), "text": str(sup), "measure": str(sup.measure()),
            "fixed_loci": loci}, f"rsupp = {sup}"


def cmd_commutes(args):
    a, b = _element(args.a), _element(args.b)
    ok = commutes(a, b)
    return {"commutes": ok}, "commute" if ok else "do not commute"


def cmd_localize(args):
    e = _element(args.table)
    mu = parse_tuple(args.mu, e.signature)
    return table_to_dict(localize(e, mu)), f"localized into {args.mu}"


# -- group analysis ---------------------------------------------------------------

def _gens(path):
    return generators_from_dict(load_json(path))


def cmd_ball(args):
    gens = _gens(args.gens)
    entries = ball(gens, args.radius)
    out = {"radius": args.radius, "size": len(entries),
           "elements": [{"word": list(b.word), "rows": len(b.element.rows),
                         "rsupp": str(rsupp(b.element))} for b in entries]}
    return out, f"ball of radius {args.radius}: {len(entries)} elements"


def cmd_disjoint(args):
    gens = _gens(args.gens)
    g, f = _element(args.g, gens.signature), _element(args.f, gens.signature)
    v = algebraically_disjoint(g, f, gens, args.rh, args.rf, args.budget)
    out = v.to_dict()
    if v.witness is not None:
        out["replayed"] = replay_counterexample(g, f, gens, v, args.rf)
    return out, f"{v.kind} (radius {v.radius})"


def cmd_algsupp(args):
    gens = _gens(args.gens)
    f = _element(args.f, gens.signature)
    report = check_alg_supp(f, gens, args.radius, budget=args.budget)
    out = report.to_dict()
    if not report.ok:
        raise CheckFailed(out)
    return out, (f"{len(report.verified_g)} verified g, "
                 f"{len(report.containment_violations)} containment violations")


# -- embeddings -------------------------------------------------------------------

def cmd_push(args):
    spec = _spec(args.spec)
    e = _element(args.table, spec.source)
    return table_to_dict(push_forward(spec, e)), "pushed forward"


def cmd_anchor_check(args):
    spec = _spec(args.spec)
    if args.tables:
        elements = [_element(p, spec.source) for p in args.tables]
    else:
        elements = checks.sample_elements(spec.source, args.n, args.seed, local_every=3)
    report = check_anchor(spec, elements, args.points, args.seed)
    out = report.to_dict(full=args.verbose)
    out["seed"] = args.seed
    if not report.ok:
        raise CheckFailed(out)
    return out, f"anchor identity holds on {len(report.entries)} elements"


def cmd_lr_check(args):
    spec = _spec(args.spec)
    gamma = _element(args.gamma, spec.source)
    probes = [_element(p, spec.source) for p in args.probes]
    report = check_local_regularity(spec, gamma, probes)
    out = report.to_dict()
    if not report.ok:
        raise CheckFailed(out)
    return out, f"{len(probes)} probes consistent"


def cmd_full_support(args):
    spec = _spec(args.spec)
    gens = _gens(args.gens)
    report = check_full_support(spec, gens.elements, args.depth)
    out = report.to_dict()
    if not report.full_support:
        raise CheckFailed(out)
    return out, "no global fixed points"


def cmd_density_witness(args):
    spec = _spec(args.spec)
    y = parse_point(args.point, spec.target)
    U = parse_clopen(args.clopen, spec.target)
    try:
        tau = witness_local_density(spec, y, U, min_length=args.min_length,
                                    probe_depth=args.depth)
    except NoWitness as exc:
        raise CheckFailed({"error": "NoWitness", "message": str(exc)}) from None
    image_support = rsupp(push_forward(spec, tau))
    return {"witness": table_to_dict(tau), "rsupp_image": str(image_support)}, \
        f"witness with image support {image_support}"


def cmd_rho(args):
    spec = _spec(args.spec)
    y = parse_point(args.point, spec.target)
    res = rho_eval(spec, y, args.depth, args.seed)
    out = res.to_dict()
    out["witnesses"] = [table_to_dict(t) for t in res.chain.witnesses]
    if not res.agrees:
        raise CheckFailed(out)
    return out, f"rho prefix {out['prefix']}"


def cmd_selftest(args):
    results = checks.full_checks() if args.full else checks.quick_checks()
    if not args.quiet:
        for r in results:
            print(r.line(), file=sys.stderr)
    out = {"results": [{"name": r.name, "passed": r.passed, "checked": r.checked,
                        "failures": r.failures[:5]} for r in results]}
    if not all(r.passed for r in results):
        raise CheckFailed(out)
    return out, "all checks passed"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="brinthompson",
                                description="Exact computations in generalized Brin-Thompson groups.")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("-q", "--quiet", action="store_true", help="no summary on stderr")
    sub = p.add_subparsers(dest="command", required=True)
    # the same options after the subcommand; SUPPRESS keeps the top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS,
                        help=argparse.SUPPRESS)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    sp = add("validate", cmd_validate, "check that a table file is a valid table")
    sp.add_argument("table")
    sp = add("compose", cmd_compose, "table of a o b (b acts first)")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("invert", cmd_invert, "inverse table")
    sp.add_argument("table")
    sp = add("apply", cmd_apply, "image of an eventually periodic point")
    sp.add_argument("table")
    sp.add_argument("--point", required=True, help='e.g. "[1(0),(10)]"')
    sp = add("rsupp", cmd_rsupp, "regular support and fixed loci")
    sp.add_argument("table")
    sp.add_argument("--side", choices=["v", "u"], default="v")
    sp = add("commutes", cmd_commutes, "do two elements commute")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("localize", cmd_localize, "copy of an element inside a cylinder")
    sp.add_argument("table")
    sp.add_argument("--mu", required=True, help='cylinder word tuple, e.g. "[1]"')

    sp = add("ball", cmd_ball, "enumerate a word ball")
    sp.add_argument("--gens", required=True)
    sp.add_argument("--radius", type=_nonneg, default=2)
    sp = add("disjoint", cmd_disjoint, "bounded algebraic disjointness test")
    for name in ("--g", "--f", "--gens"):
        sp.add_argument(name, required=True)
    sp.add_argument("--rh", type=_nonneg, default=3)
    sp.add_argument("--rf", type=_nonneg, default=3)
    sp.add_argument("--budget", type=_positive("budget"), default=None)
    sp = add("algsupp", cmd_algsupp, "cross-check localized subgroups against twelfth powers")
    sp.add_argument("--f", required=True)
    sp.add_argument("--gens", required=True)
    sp.add_argument("--radius", type=_nonneg, default=3)
    sp.add_argument("--budget", type=_positive("budget"), default=None)

    sp = add("push", cmd_push, "image of an element under an embedding")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--table", required=True)
    sp = add("anchor-check", cmd_anchor_check, "check the projection anchor identity")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--n", type=_positive("n"), default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", type=_positive("points"), default=10)
    sp.add_argument("--tables", nargs="*", help="check these elements instead of random ones")
    sp.add_argument("--verbose", action="store_true", help="include every entry in the report")
    sp = add("lr-check", cmd_lr_check, "local regularity spot check")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--probes", nargs="+", required=True)
    sp = add("full-support", cmd_full_support, "global fixed points of the image of a generator set")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--gens", required=True)
    sp.add_argument("--depth", type=_positive("depth"), default=6)
    sp = add("density-witness", cmd_density_witness, "local density witness around a point")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--clopen", required=True, help='e.g. "{[0,]}"')
    sp.add_argument("--min-length", type=_nonneg, default=0)
    sp.add_argument("--depth", type=_positive("depth"), default=64)
    sp = add("rho", cmd_rho, "finite-depth anchor limit at a point")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--depth", type=_positive("depth"), default=8)
    sp.add_argument("--seed", type=int, default=None)
    sp = add("selftest", cmd_selftest, "run the built-in checks")
    sp.add_argument("--full", action="store_true", help="acceptance-size runs")
    return p


def _emit(obj, args):
    text = dump_json(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        out, summary = args.func(args)
    except CheckFailed as exc:
        _emit(exc.args[0], args)
        if not args.quiet:
            print(f"{args.command}: check failed", file=sys.stderr)
        return EXIT_FAIL
    except TableError as exc:
        _emit(exc.to_dict(), args)
        if not args.quiet:
            print(f"{args.command}: {exc.kind}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, SignatureMismatch, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args)
        if not args.quiet:
            print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(out, args)
    if not args.quiet:
        print(f"{args.command}: {summary} ({time.perf_counter() - start:.2f}s)", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
