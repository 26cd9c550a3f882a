"""Command-line front end.

Exit codes: 0 when every check passes, 1 when one fails, 2 on bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import cardy as cd
from . import diagrams as dg
from . import double as db
from . import dsl
from . import frobenius as fr
from . import modular as md
from . import sl2z
from .category import Category, InputError, builtin, load_category, validate_category
from .report import CheckReport, composite

REPORT_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(InputError):
    pass


# ----- output ------------------------------------------------------------------------


def _witness_list(w) -> list:
    """Witnesses are always arrays in JSON output: index tuples stay as they are."""
    if w is None:
        return []
    return list(w) if isinstance(w, (list, tuple)) else [w]


def report_json(reports: Sequence[CheckReport]) -> list[dict]:
    out = []
    for r in reports:
        d = r.to_dict()
        d["witness"] = _witness_list(d["witness"])
        d["report_version"] = REPORT_VERSION
        if r.details:
            d["details"] = report_json(r.details)
        out.append(d)
    return out


def report_schema() -> dict:
    """The JSON schema every ``--json`` report list conforms to."""
    from importlib import resources

    return json.loads(resources.files("mtcalc.data").joinpath("report.schema.json").read_text())


def _print_tree(r: CheckReport, depth: int, out) -> None:
    print("  " * depth + r.line() + (f"  [{r.note}]" if r.note else ""), file=out)
    for d in r.details:
        _print_tree(d, depth + 1, out)


def emit(reports: Sequence[CheckReport], args, out=None) -> int:
    out = out or sys.stdout
    if args.json:
        json.dump(report_json(reports), out, indent=1)
        print(file=out)
    else:
        for r in reports:
            _print_tree(r, 0, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _mat(M: np.ndarray) -> list:
    return [[_cplx(z) for z in row] for row in M]


def _fmt(z: complex) -> str:
    z = complex(z)
    z = complex(0.0 if abs(z.real) < 1e-14 else z.real, 0.0 if abs(z.imag) < 1e-14 else z.imag)
    if z.imag == 0:
        return f"{z.real:.10g}"
    return f"{z.real:.10g}{z.imag:+.10g}i"


# ----- category selection ---------------------------------------------------------------


def _category(args, positional: str | None = None) -> Category:
    sources = [x for x in (positional, args.category, args.builtin) if x]
    if len(sources) > 1:
        raise UsageError("give exactly one of FILE, --category or --builtin")
    if not sources:
        raise UsageError("no category: use --builtin NAME or --category PATH")
    if args.builtin:
        return builtin(args.builtin)
    return load_category(Path(sources[0]))


def _run_parallel(jobs: list[Callable[[], CheckReport]], threads: int) -> list[CheckReport]:
    if threads <= 1 or len(jobs) <= 1:
        return [j() for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda j: j(), jobs))


# ----- subcommands -----------------------------------------------------------------------


def cmd_validate(args) -> int:
    cat = _category(args, args.file)
    return emit([validate_category(cat, args.tol)], args)


def cmd_info(args) -> int:
    cat = _category(args)
    if args.double:
        info = db.double_summary(cat)
    else:
        info = {
            "name": cat.name,
            "labels": list(cat.labels),
            "rank": cat.rank,
            "dual": {cat.labels[a]: cat.labels[int(cat.dual[a])] for a in range(cat.rank)},
            "dims": {cat.labels[a]: float(cat.dims[a]) for a in range(cat.rank)},
            "twists": {cat.labels[a]: _cplx(cat.twists[a]) for a in range(cat.rank)},
            "D": float(cat.global_dim),
            "cmod8": cat.cmod8,
            "multiplicity_free": bool(cat.multiplicity_free),
        }
    if args.json:
        json.dump(info, sys.stdout, indent=1)
        print()
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return EXIT_OK


def cmd_smatrix(args) -> int:
    cat = _category(args)
    S = md.s_matrix(cat)
    if args.json:
        json.dump({"labels": list(cat.labels), "S": _mat(S), "T": [_cplx(t) for t in cat.twists]}, sys.stdout, indent=1)
        print()
    else:
        w = max(len(x) for x in cat.labels)
        for a, row in zip(cat.labels, S):
            print(f"{a:>{w}}  " + "  ".join(f"{_fmt(z):>22}" for z in row))
    return EXIT_OK


def cmd_check_relations(args) -> int:
    cat = _category(args)
    return emit([md.check_modular_relations(cat, args.tol)], args)


def cmd_check_frobenius(args) -> int:
    cat = _category(args)
    A = fr.from_json(args.file, cat)
    reps = [fr.check_all(A, args.tol)]
    if A.host is not cat:
        reps.append(fr.check_commutative_trivial_twist(A, args.tol))
    return emit(reps, args)


def cmd_check_modular_invariance(args) -> int:
    cat = _category(args)
    A = fr.from_json(args.file, cat)
    if A.host is cat:
        raise InputError("modular invariance needs an algebra in the double (host 'double')")
    return emit([cd.check_modular_invariance(A, args.tol)], args)


def cmd_build_cardy(args) -> int:
    cat = _category(args)
    T3 = cd.build_cardy_case(cat, cd.parse_brane(cat, args.brane))
    text = json.dumps(cd.to_json(T3), indent=1)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text)
    return EXIT_OK


def cmd_check_cardy(args) -> int:
    cat = _category(args)
    T3 = cd.from_json(args.file, cat)
    jobs = [
        lambda: fr.check_all(T3.A_op, args.tol),
        lambda: fr.check_commutative_trivial_twist(T3.A_cl, args.tol),
        lambda: cd.check_modular_invariance(T3.A_cl, max(args.tol, 1e-8)),
        lambda: cd.check_open_closed(T3, max(args.tol, 1e-8)),
        lambda: cd.check_cardy(T3, max(args.tol, 1e-8)),
    ]
    return emit(_run_parallel(jobs, args.threads), args)


def cmd_check_sl2z(args) -> int:
    cat = _category(args)
    return emit([sl2z.check_sl2z(cat, max(args.tol, 1e-8))], args)


def cmd_eval(args) -> int:
    cat = _category(args)
    h = dsl.evaluate(args.expr, cat)
    d = dsl.describe(h)
    if args.json:
        json.dump(d, sys.stdout, indent=1)
        print()
    elif "scalar" in d:
        print(_fmt(complex(*d["scalar"])))
    else:
        print(f"{' ⊗ '.join(d['src']) or '1'} → {' ⊗ '.join(d['tgt']) or '1'}")
        for c, b in h.blocks.items():
            if b.size:
                print(f"  [{cat.labels[c]}] " + np.array2string(b, precision=6, suppress_small=True).replace("\n", "\n      "))
    return EXIT_OK


def run_all_jobs(cat: Category, tol: float) -> list[Callable[[], CheckReport]]:
    """Every checker on one category; each entry is independent of the others."""
    t8 = max(tol, 1e-8)

    def closed_suite() -> CheckReport:
        A = cd.build_diagonal_closed(cat)
        return composite("closed-algebra", [
            fr.check_all(A, tol),
            fr.check_commutative_trivial_twist(A, tol),
            cd.check_modular_invariance(A, t8),
        ], tol)

    def branes() -> CheckReport:
        return composite("branes", [r for _, r in cd.enumerate_branes(cat, 1, t8)], t8)

    d = db.build_double(cat)
    return [
        lambda: validate_category(cat, tol),
        lambda: dg.graphical_suite(cat, tol),
        lambda: dg.operator_suite(cat, min(tol, 1e-10)),
        lambda: md.check_modular_relations(cat, tol),
        lambda: validate_category(d, tol),
        lambda: db.check_s_factorization(d, tol),
        lambda: db.check_t_functor(d, min(tol, 1e-10)),
        lambda: md.check_modular_relations(d, tol),
        lambda: sl2z.check_sl2z(cat, t8),
        closed_suite,
        branes,
        lambda: _dsl_smoke(cat, tol),
    ]


def _dsl_smoke(cat: Category, tol: float) -> CheckReport:
    """Loop values of every label through the expression language."""
    worst, at = 0.0, None
    for a, name in enumerate(cat.labels):
        r = max(
            abs(dsl.evaluate(f"(trace (id {name}))", cat).scalar() - cat.dims[a]),
            abs(dsl.evaluate(f"(trace (twist {name}))", cat).scalar() - cat.twists[a] * cat.dims[a]),
        )
        if r > worst:
            worst, at = r, name
    return CheckReport("diagram-language-loops", worst, tol, at)


def cmd_schema(args) -> int:
    json.dump(report_schema(), sys.stdout, indent=1)
    print()
    return EXIT_OK


def cmd_run_all(args) -> int:
    cat = _category(args)
    return emit(_run_parallel(run_all_jobs(cat, args.tol), args.threads), args)


# ----- parser ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = p.add_argument_group("category and output")
    g.add_argument("--category", metavar="PATH", default=dflt(None), help="category JSON file")
    g.add_argument("--builtin", metavar="NAME", default=dflt(None), help="trivial, fibonacci, ising or z3")
    g.add_argument("--tol", type=float, default=dflt(1e-9), help="tolerance (default 1e-9)")
    g.add_argument("--json", action="store_true", default=dflt(False), help="machine-readable output")
    g.add_argument("--threads", type=int, default=dflt(1), metavar="N", help="run independent checks in N threads")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mtcalc", description="Checks for modular tensor categories, modular invariants and Cardy algebras.")
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name: str, fn, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, description=help)
        _common(sp, suppress=True)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "pentagon, hexagons, ribbon and duality checks")
    sp.add_argument("file", nargs="?", help="category JSON (alternative to --category)")
    sp = add("info", cmd_info, "summary of a category or its double")
    sp.add_argument("--double", action="store_true")
    add("smatrix", cmd_smatrix, "print the S-matrix")
    add("check-relations", cmd_check_relations, "modular relations of the S and T actions")
    sp = add("check-frobenius", cmd_check_frobenius, "algebra, Frobenius and symmetry checks on an algebra file")
    sp.add_argument("file")
    sp = add("check-modular-invariance", cmd_check_modular_invariance, "modular invariance of a closed algebra file")
    sp.add_argument("file")
    sp = add("build-cardy", cmd_build_cardy, "build the Cardy triple of a brane and write it as JSON")
    sp.add_argument("--brane", required=True, help="e.g. 'tau', '1+tau', '2*sigma'")
    sp.add_argument("-o", "--output", help="write to this file instead of stdout")
    sp = add("check-cardy", cmd_check_cardy, "open-closed and Cardy checks on a triple file")
    sp.add_argument("file")
    add("check-sl2z", cmd_check_sl2z, "S alpha = beta S on every two-point space")
    sp = add("eval", cmd_eval, "evaluate a diagram expression")
    sp.add_argument("expr")
    add("run-all", cmd_run_all, "every check on one category")
    add("schema", cmd_schema, "print the JSON schema of --json reports")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.fn(args)
    except InputError as e:
        print(f"mtcalc: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
