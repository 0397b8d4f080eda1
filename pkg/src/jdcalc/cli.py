"""The ``jd`` command line.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abelian import WellDefinednessError
from .diagram import DiagramExpr, label_str, star as star_label
from .parse import ParseError, parse_expr, render
from .spaces import FlavorError, ResourceError, SpaceFlavor, VARIANTS, nf_mod2, presentation, representative_half, representative_mod2

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(text)


def _flavor(args) -> SpaceFlavor:
    space = args.space
    if space == "c" and args.loops is not None:
        space = "ck"  # a loop count selects the fixed-loop summand
    try:
        return SpaceFlavor(args.genus, args.ideg, space, loops=args.loops, legs=args.legs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------- subcommands


def cmd_structure(args) -> int:
    fl = _flavor(args)
    grp = presentation(fl).group
    _emit(args, grp.describe(), {
        "flavor": fl.descriptor(),
        "rank": grp.rank,
        "torsion": list(grp.torsion_factors),
        "structure": grp.describe(),
    })
    return EXIT_OK


def cmd_basis(args) -> int:
    fl = _flavor(args)
    pres = presentation(fl)
    if pres.ambient is not None:
        gens = [render(DiagramExpr({k: c for k, c in ((pres.ambient.keys[i], c) for i, c in v.items())})) for v in pres.embedding]
    else:
        gens = [render(DiagramExpr({k: 1})) for k in pres.keys]
    text = "\n".join(f"g{i + 1} = {s}" for i, s in enumerate(gens))
    text += f"\n{len(gens)} generators, {len(pres.group.relators)} relators; structure {pres.group.describe()}"
    _emit(args, text, {
        "flavor": fl.descriptor(),
        "generators": gens,
        "relators": [sorted([i, c] for i, c in r.items()) for r in pres.group.relators],
        "structure": pres.group.describe(),
    })
    return EXIT_OK


def _label_arg(text: str, genus: int) -> int:
    from .diagram import parse_label

    dual = text.endswith("*")
    lab = parse_label(text.rstrip("*"), genus)
    return star_label(lab) if dual else lab


def _apply(op: str, exprs: list[DiagramExpr], genus: int):
    from . import operators as ops

    unary = {
        "delta": ops.delta,
        "delta1": ops.delta_prime,
        "delta2": ops.delta_double_prime,
        "Y": ops.Y_op,
        "Delta": ops.Delta,
        "rev": ops.rev,
        "halfDelta": ops.half_delta,
        "halfDeltaY": ops.half_delta_plus_Y,
    }
    binary = {"star": ops.star, "compose": ops.compose}
    if op.startswith("deltaAt:"):
        lab = _label_arg(op.split(":", 1)[1], genus)
        fn = lambda e: ops.delta_at_color(e, lab)  # noqa: E731
        need = 1
    elif op in unary:
        fn, need = unary[op], 1
    elif op in binary:
        fn, need = binary[op], 2
    else:
        raise UsageError(f"unknown operator {op!r}")
    if len(exprs) != need:
        raise UsageError(f"operator {op} takes {need} expression(s)")
    return fn(*exprs)


def cmd_apply(args) -> int:
    from .operators import HalfValue

    exprs = [parse_expr(t, args.genus) for t in args.expr]
    out = _apply(args.op, exprs, args.genus)
    if isinstance(out, HalfValue):
        lift = representative_half(out.nf)
        body = render(lift)
        _emit(args, f"1/2 * ({body})" if body != "0" else "0", {"op": args.op, "coefficient": "1/2", "expression": body, "ring": "Q/Z"})
        return EXIT_OK
    if out.ring == "Z2":
        out = representative_mod2(nf_mod2(out))
    body = render(out)
    _emit(args, body, {"op": args.op, "expression": body, "ring": out.ring})
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    if args.suite == "list":
        names = sorted(SUITES)
        _emit(args, "\n".join(f"{n}  (degree = {SUITES[n].degree_meaning})" for n in names), {"suites": names})
        return EXIT_OK
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; try 'jd verify list'")
    params = {"genus": args.genus, "degree": args.ideg, "seed": args.seed, "pairs": args.pairs}
    if "seed" not in SUITES[args.suite].defaults:
        params.pop("seed")
        params.pop("pairs")
    report = run_suite(args.suite, params, timing=args.timing)
    if args.json:
        print(report.to_json())
    else:
        for c in report.cases:
            print(f"[{c.status}] {c.id}: expected {c.expected!r}, computed {c.computed!r}")
        print(f"{report.suite}: {'PASS' if report.passed else 'FAIL'} ({len(report.cases)} cases, {report.skipped} skipped)")
    if not report.passed:
        return EXIT_FAIL
    return EXIT_RESOURCE if report.skipped else EXIT_OK


def cmd_count(args) -> int:
    from .enumeration import bracelets_brute, counts, necklaces_brute, rank_formula

    q = args.alphabet if args.alphabet else 2 * args.genus
    data = counts(q, args.length)
    if args.brute:
        data["necklacesBrute"] = necklaces_brute(q, args.length)
        data["braceletsBrute"] = bracelets_brute(q, args.length)
    if q % 2 == 0 and args.length >= 2:
        data["oneLoopRank"] = rank_formula(q // 2, args.length)
    data["totient"] = {str(k): v for k, v in data["totient"].items()}
    text = "\n".join(f"{k}: {v}" for k, v in data.items())
    _emit(args, text, data)
    return EXIT_OK


def cmd_lie(args) -> int:
    from . import lie

    n = args.degree
    if args.kernel:
        d, dq = lie.bracket_kernels(args.genus, n)
        grp = dq.group if args.quasi else d.group
        name = ("D'" if args.quasi else "D") + f"_{n}"
        _emit(args, f"{name} = {grp.describe()}", {"name": name, "structure": grp.describe(), "rank": grp.rank, "torsion": list(grp.torsion_factors)})
        return EXIT_OK
    if args.quasi:
        ql = lie.quasi_lie(args.genus, n)
        grp = ql.group
        basis = [lie.tree_str(t) for t in ql.trees]
        name = f"L'_{n}"
    else:
        fl = lie.free_lie(args.genus, n)
        grp = fl.group
        basis = [lie.tree_str(fl.tree(i)) for i in range(fl.dimension)]
        name = f"L_{n}"
    text = f"{name} = {grp.describe()}\n" + "\n".join(basis)
    _emit(args, text, {"name": name, "structure": grp.describe(), "rank": grp.rank, "torsion": list(grp.torsion_factors), "generators": basis})
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jd", description="Jacobi diagram modules, operators and verification suites.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, ideg=True):
        sp.add_argument("--genus", type=int, default=1)
        if ideg:
            sp.add_argument("--ideg", type=int)
        sp.add_argument("--json", action="store_true")

    for name, fn, helptext in (("structure", cmd_structure, "invariant factors of a module"), ("basis", cmd_basis, "generators and relators of a module")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--space", choices=VARIANTS, default="c")
        sp.add_argument("--loops", type=int)
        sp.add_argument("--legs", type=int)
        sp.set_defaults(func=fn, need_ideg=True)

    sp = sub.add_parser("apply", help="apply an operator to diagram expressions")
    common(sp, ideg=False)
    sp.add_argument("--op", required=True)
    sp.add_argument("expr", nargs="+")
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("verify", help="run a verification suite ('list' to list them)")
    common(sp)
    sp.add_argument("suite")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--pairs", type=int)
    sp.add_argument("--timing", action="store_true", help="record wall time (makes reports run-dependent)")
    sp.set_defaults(func=cmd_verify, genus=None)

    sp = sub.add_parser("count", help="necklace, bracelet and Witt counts")
    common(sp, ideg=False)
    sp.add_argument("--alphabet", type=int)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--brute", action="store_true")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("lie", help="free Lie and quasi-Lie groups and bracket kernels")
    common(sp, ideg=False)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--quasi", action="store_true")
    sp.add_argument("--kernel", action="store_true")
    sp.set_defaults(func=cmd_lie)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("missing subcommand")
        if getattr(args, "need_ideg", False) and args.ideg is None:
            raise UsageError("--ideg is required")
        return args.func(args)
    except UsageError as exc:
        print(f"jd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"jd: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"jd: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (FlavorError, WellDefinednessError, ValueError) as exc:
        print(f"jd: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
