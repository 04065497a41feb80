"""Command-line front end.

Exit codes: 0 success, 1 I/O or schema error, 2 validation failure,
64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .complex import FilteredComplex, StructuralError, reduce, validate
from .cone import DualSpinc, SurgeryCone, build_cone, dual_spinc_structures, truncation_bounds
from .dual import dual_cfk, hf_hat, hfk_hat_all
from .heegaard import DiagramError, diagram_from_json, view_gradings
from .homology import GradedTable
from .io import (SchemaError, bundle_from_json, complex_from_json, complex_to_json, cone_to_json, data_path,
                 dumps, read_json, table_to_json)
from .knot import BundleError, KnotComplexBundle
from .rational import format_rational
from .rational_surgery import one_over_n_surgery, ratl_filtration_check

EXIT_IO, EXIT_INVALID, EXIT_USAGE = 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="floercone", description="Knot Floer complexes of dual knots via the surgery mapping cone.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, bundle=False, k=False):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if bundle:
            sp.add_argument("--bundle", required=True, help="bundle.v1 file, or the name of a bundled example")
        if k:
            sp.add_argument("--k", type=int, help="framing (defaults to the bundle's k)")
            sp.add_argument("--spinc", help="dual spin^c label sector:s0 (default: all)")
            sp.add_argument("--a", type=int)
            sp.add_argument("--b", type=int)
            sp.add_argument("--uCap", type=int, dest="ucap", help="work over F2[U]/U^(uCap+1)")

    sp = sub.add_parser("validate", help="check a complex, bundle or diagram file")
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--bundle")
    g.add_argument("--complex")
    g.add_argument("--diagram")

    sp = sub.add_parser("reduce", help="cancel filtration-preserving unit terms")
    common(sp)
    sp.add_argument("--complex", required=True)

    sp = sub.add_parser("grade-diagram", help="absolute Alexander gradings of diagram generators")
    common(sp)
    sp.add_argument("--diagram", required=True)

    common(sub.add_parser("surgery", help="reduced cone for each dual spin^c structure"), bundle=True, k=True)
    common(sub.add_parser("hfk", help="knot Floer homology of the dual knot"), bundle=True, k=True)
    common(sub.add_parser("dualcfk", help="reduced knot complex of the dual knot"), bundle=True, k=True)

    sp = sub.add_parser("rational-surgery", help="1/n surgery on a knot in an integer homology sphere")
    common(sp, bundle=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.add_argument("--uCap", type=int, dest="ucap")

    sp = sub.add_parser("selftest", help="run the bundled golden checks")
    sp.add_argument("--format", choices=("json", "text"), default="text")
    return p


# -- loading --------------------------------------------------------------------------

def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    name = p.name if p.suffix == ".json" else p.name + ".json"
    bundled = data_path(name)
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"no such file: {path}")


def load_bundle_arg(path: str) -> KnotComplexBundle:
    return bundle_from_json(read_json(_resolve(path)))


def _cones(args, bundle: KnotComplexBundle) -> list[SurgeryCone]:
    k = args.k if args.k is not None else bundle.k
    if k is None:
        raise UsageError("no framing: pass --k or set k in the bundle")
    if k == 0:
        raise BundleError("framing k must be nonzero")
    duals = dual_spinc_structures(bundle, k)
    if args.spinc:
        wanted = DualSpinc.parse(args.spinc)
        if wanted not in duals:
            raise UsageError(f"unknown dual spin^c {args.spinc}; choices: {', '.join(d.label for d in duals)}")
        duals = [wanted]
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b must be given together")
    if args.a is not None and len(duals) != 1:
        raise UsageError("--a/--b need a single --spinc")
    return [build_cone(bundle, k, d, args.a, args.b, args.ucap) for d in duals]


# -- text rendering -----------------------------------------------------------------

def _dterm(p, y: str) -> str:
    r = repr(p)
    return y if r == "1" else (f"{r}*{y}" if len(p) == 1 else f"({r})*{y}")


def complex_text(c: FilteredComplex, graded: bool = True) -> str:
    width = max([len(g.id) for g in c.basis] + [9])
    lines = [f"{'generator':<{width}}  {'I':>3}  {'J':>6}  {'gr':>6}  d"]
    for g in c.basis:
        dx = " + ".join(_dterm(p, y) for y, p in c.diff[g.id].items()) or "0"
        gr = format_rational(g.gr) if graded else "-"
        lines.append(f"{g.id:<{width}}  {0:>3}  {format_rational(g.j):>6}  {gr:>6}  {dx}")
    return "\n".join(lines)


def _emit(doc, text: str, fmt: str) -> None:
    print(dumps(doc) if fmt == "json" else text)


# -- commands --------------------------------------------------------------------------

def cmd_validate(args) -> int:
    if args.bundle:
        try:
            load_bundle_arg(args.bundle)
            violations = []
        except BundleError as exc:
            violations = [v.as_dict() for v in exc.violations] or [{"kind": "bundle", "detail": str(exc)}]
    elif args.complex:
        rep = validate(complex_from_json(read_json(_resolve(args.complex))))
        violations = [v.as_dict() for v in rep.violations]
    else:
        try:
            diagram_from_json(read_json(_resolve(args.diagram)))
            violations = []
        except DiagramError as exc:
            violations = [{"kind": "diagram", "detail": str(exc)}]
    doc = {"ok": not violations, "violations": violations}
    text = "ok" if not violations else "\n".join(f"{v.get('kind')}: {v.get('source', '')} {v.get('target', '') or ''} "
                                                 f"{v.get('detail', '')}".strip() for v in violations)
    _emit(doc, text, args.format)
    return 0 if not violations else EXIT_INVALID


def cmd_reduce(args) -> int:
    c = complex_from_json(read_json(_resolve(args.complex)))
    rep = validate(c)
    if not rep.ok:
        _emit({"ok": False, "violations": [v.as_dict() for v in rep.violations]}, "invalid complex", args.format)
        return EXIT_INVALID
    red = reduce(c).reduced
    _emit(complex_to_json(red), complex_text(red), args.format)
    return 0


def cmd_grade_diagram(args) -> int:
    diagram = diagram_from_json(read_json(_resolve(args.diagram)))
    rows, lines = [], [f"{'view':<14}{'generator':<12}{'A':>8}"]
    for view in diagram.views:
        for gen, a in view_gradings(diagram, view):
            rows.append({"spinc": view.name, "generator": gen, "A": format_rational(a), "gr": None, "rank": 1})
            lines.append(f"{view.name:<14}{gen:<12}{format_rational(a):>8}")
    _emit({"schema": "table.v1", "kind": "alexander", "rows": rows}, "\n".join(lines), args.format)
    return 0


def _surgery_payload(cones: list[SurgeryCone]) -> tuple[dict, str]:
    docs, texts = [], []
    for cone in cones:
        red = dual_cfk(cone)
        doc = cone_to_json(cone)
        doc["reduced"] = complex_to_json(red)
        doc["hf"] = hf_hat(cone).as_rows()
        docs.append(doc)
        texts.append(f"# dual spin^c {cone.label}  (k={cone.k}, l in [{cone.a}, {cone.b}]"
                     f"{', degenerate' if cone.degenerate else ''})\n"
                     + complex_text(red, cone.bundle.graded))
    return {"schema": "surgery.v1", "cones": docs}, "\n\n".join(texts)


def cmd_surgery(args) -> int:
    doc, text = _surgery_payload(_cones(args, load_bundle_arg(args.bundle)))
    _emit(doc, text, args.format)
    return 0


def cmd_hfk(args) -> int:
    table = GradedTable()
    for cone in _cones(args, load_bundle_arg(args.bundle)):
        table = table.merged(hfk_hat_all(cone))
    _emit(table_to_json(table, "hfk"), table.to_text(), args.format)
    return 0


def cmd_dualcfk(args) -> int:
    cones = _cones(args, load_bundle_arg(args.bundle))
    complexes = [dual_cfk(c) for c in cones]
    doc = {"schema": "dualcfk.v1", "sectors": [complex_to_json(c) for c in complexes]}
    text = "\n\n".join(f"# sector {cone.label}\n{complex_text(c, cone.bundle.graded)}" for cone, c in zip(cones, complexes))
    _emit(doc, text, args.format)
    return 0


def cmd_rational(args) -> int:
    bundle = load_bundle_arg(args.bundle)
    if args.n <= 0:
        raise BundleError("n must be a positive integer")
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b must be given together")
    cone = one_over_n_surgery(bundle, args.n, args.a, args.b, args.ucap)
    report = ratl_filtration_check(cone)
    doc, text = _surgery_payload([cone])
    doc["ratl_check"] = {"ok": report.ok, "checked": report.checked_elements, "mismatches": report.mismatches}
    text += f"\n\nclosed-form filtration check: {'ok' if report.ok else 'MISMATCH'} ({report.checked_elements} elements)"
    _emit(doc, text, args.format)
    return 0 if report.ok else EXIT_INVALID


def cmd_selftest(args) -> int:
    from .selftest import run_all
    results = run_all()
    if args.format == "json":
        print(dumps({"results": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}))
    else:
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    return 0 if all(ok for _, ok, _ in results) else EXIT_INVALID


COMMANDS = {
    "validate": cmd_validate, "reduce": cmd_reduce, "grade-diagram": cmd_grade_diagram,
    "surgery": cmd_surgery, "hfk": cmd_hfk, "dualcfk": cmd_dualcfk,
    "rational-surgery": cmd_rational, "selftest": cmd_selftest,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"floercone: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BundleError, DiagramError) as exc:
        violations = [v.as_dict() for v in getattr(exc, "violations", [])]
        print(json.dumps({"ok": False, "error": str(exc), "violations": violations}), file=sys.stderr)
        return EXIT_INVALID
    except (OSError, SchemaError, StructuralError, json.JSONDecodeError) as exc:
        print(f"floercone: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
