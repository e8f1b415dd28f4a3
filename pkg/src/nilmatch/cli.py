"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 internal invariant
violation.  Defaults for ``--p`` and ``--precision`` can be set through the
environment variables ``NILMATCH_P`` and ``NILMATCH_PRECISION``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .building import RootDatum, apartment_svg, moy_prasad, quotient_dimension
from .denefpas.evaluate import DPStructure, bind, evaluate
from .denefpas.parser import parse
from .denefpas.syntax import free_vars
from .errors import DomainError, FormulaError, InternalInvariantError, NilmatchError
from .matching import match, match_all
from .orbits import OrbitLabel, labels, orbit_dimension, representative
from .padic import FieldContext, parse_element
from .quadforms import SQUARE_CLASSES, DiagonalForm, classify_tags, square_class
from .repro import EXAMPLES

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3

# options whose values may start with "-" (e.g. "--point -1/2,-1/2")
_SIGNED_VALUE_OPTIONS = ("--point", "--z-window", "--vf-val-window")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers in {text!r}") from None


def _field_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("field")
    g.add_argument("--p", type=int, default=None, help="residue characteristic, an odd prime (env NILMATCH_P, default 7)")
    g.add_argument("--k", type=int, default=1, help="degree of the unramified extension (q = p^k)")
    g.add_argument("--precision", type=int, default=None, help="p-adic digits kept (env NILMATCH_PRECISION, default 32)")
    g.add_argument("--json", action="store_true", help="emit JSON instead of text")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _field_options()
    ap = _Parser(prog="nilmatch", description="Nilpotent orbits, Moy-Prasad lattices and Denef-Pas formulas over p-adic fields.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    orb = sub.add_parser("orbits", help="rational nilpotent orbit labels")
    osub = orb.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    osub.required = True
    ol = osub.add_parser("list", parents=[common], help="list the orbit labels")
    ol.add_argument("--algebra", choices=("sl", "sp"), required=True, help="sl for sl_n, sp for sp_2n")
    ol.add_argument("--n", type=int, required=True, help="n in sl_n or sp_2n")
    orp = osub.add_parser("rep", parents=[common], help="representative matrix of a label")
    orp.add_argument("--label", required=True, help='label JSON, e.g. {"alg":"sl","n":3,"lambda":[3],"datum":{"j":1,"i":0}}')

    qf = sub.add_parser("qform", help="quadratic forms")
    qsub = qf.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    qsub.required = True
    qc = qsub.add_parser("classify", parents=[common], help="classify a diagonal form")
    qc.add_argument("entries", help="comma-separated diagonal entries: tags (1,eps,pi,eps*pi) or elements (3, -pi^2, 2/5)")

    bd = sub.add_parser("building", help="the standard apartment")
    bsub = bd.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    bsub.required = True
    bl = bsub.add_parser("lattice", parents=[common], help="Moy-Prasad lattices at a point")
    bl.add_argument("--algebra", choices=("sl", "sp"), required=True)
    bl.add_argument("--n", type=int, required=True)
    bl.add_argument("--point", required=True, help="comma-separated rational coordinates, e.g. -1/2,-1/2")
    bl.add_argument("--svg", metavar="FILE", help="also write the rank-2 apartment as SVG ('-' for stdout)")

    mt = sub.add_parser("match", parents=[common], help="match labels with facets and degenerate elements")
    mt.add_argument("--algebra", choices=("sl", "sp"), required=True)
    mt.add_argument("--n", type=int, required=True)
    mt.add_argument("--label", help="a single label as JSON (default: every label)")
    mt.add_argument("--table", action="store_true", help="full per-label table (default is one summary line per label)")

    dp = sub.add_parser("dp", help="Denef-Pas formulas")
    dsub = dp.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    dsub.required = True
    de = dsub.add_parser("eval", parents=[common], help="evaluate a formula (always prints JSON)")
    de.add_argument("--formula", required=True, help="formula text, or a path to a file holding it")
    de.add_argument("--m", type=int, default=0, help="number of coset constants d1..dm")
    de.add_argument("--z-window", type=_window, default=(-16, 16), help="Z quantifier range LO:HI")
    de.add_argument("--vf-val-window", type=_window, default=(-2, 2), help="VF quantifier valuation range LO:HI")
    de.add_argument("--vf-digits", type=int, default=2, help="digits per VF quantifier candidate")
    de.add_argument("--ring", action="store_true", help="VF quantifiers range over the valuation ring")
    de.add_argument("--set", action="append", default=[], metavar="NAME=VALUE", help="bind a free variable (repeatable)")
    de.add_argument("--sort", action="append", default=[], metavar="NAME=SORT", help="pin the sort (VF, RF or Z) of a free variable")

    rp = sub.add_parser("repro", parents=[common], help="reproduce a worked example and diff it against the golden file")
    rp.add_argument("example", choices=sorted(EXAMPLES))
    return ap


def _context(args) -> FieldContext:
    p = args.p if args.p is not None else _env_int("NILMATCH_P", 7)
    prec = args.precision if args.precision is not None else _env_int("NILMATCH_PRECISION", 32)
    return FieldContext(p, args.k, prec)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def _label(text: str, ctx: FieldContext) -> OrbitLabel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--label is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("--label must be a JSON object")
    try:
        return OrbitLabel.from_json(data, ctx)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed label: {exc}") from None


def cmd_orbits(args, ctx) -> int:
    if args.action == "list":
        labs = labels(args.algebra, args.n, ctx)
        if args.json:
            _emit([lab.to_json() for lab in labs])
        else:
            for lab in labs:
                print(f"{lab}   dim {orbit_dimension(lab)}")
            print(f"{len(labs)} labels")
        return EXIT_OK
    lab = _label(args.label, ctx)
    X = representative(lab)
    if args.json:
        _emit({"label": lab.to_json(), "representative": X.to_json()})
    else:
        print(lab)
        print(X.render())
    return EXIT_OK


def _qform_entry(text: str, ctx: FieldContext) -> str:
    t = text.strip()
    if t in SQUARE_CLASSES:
        return t
    try:
        return square_class(parse_element(t, ctx))
    except ValueError as exc:
        if isinstance(exc, NilmatchError):
            raise
        raise DomainError(str(exc)) from None


def cmd_qform(args, ctx) -> int:
    tags = [_qform_entry(e, ctx) for e in args.entries.split(",") if e.strip()]
    if not tags:
        raise UsageError("no diagonal entries given")
    DiagonalForm.from_tags(tags, ctx)
    c = classify_tags(tags, ctx)
    if args.json:
        _emit(c.to_json())
    else:
        print(f"diagonal: <{', '.join(tags)}>")
        print(f"class: {c}")
        print(f"dim {c.dim}, disc {c.disc}, hasse {c.hasse:+d}, witt index {c.witt_index}")
    return EXIT_OK


def _point(text: str) -> list[Fraction]:
    try:
        return [Fraction(c.strip()) for c in text.split(",") if c.strip()]
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot parse point {text!r}") from None


def cmd_building(args, ctx) -> int:
    rd = RootDatum.for_algebra(args.algebra, args.n)
    x = rd.point(_point(args.point))
    lat = moy_prasad(x, rd)
    if args.json:
        out = lat.to_json()
        out["quotient_dim"] = quotient_dimension(lat)
        _emit(out)
    else:
        print(f"point: {x}")
        print("g_x:")
        print(lat.render())
        print("g_x+:")
        print(lat.render(plus=True))
        print(f"dim V_x = {quotient_dimension(lat)}")
    if args.svg:
        svg = apartment_svg(rd, {"x": x})
        if args.svg == "-":
            sys.stdout.write(svg)
        else:
            Path(args.svg).write_text(svg, encoding="utf-8")
    return EXIT_OK


def cmd_match(args, ctx) -> int:
    if args.label:
        lab = _label(args.label, ctx)
        if (lab.algebra, lab.n) != (args.algebra, args.n):
            raise UsageError("--label does not belong to --algebra/--n")
        results, failures = [match(lab)], []
    else:
        report = match_all(args.algebra, args.n, ctx)
        results, failures = report.results, report.failures
    if args.json:
        _emit({"results": [r.to_json() for r in results], "failures": [[lab.to_json(), why] for lab, why in failures]})
    else:
        for r in results:
            if args.table:
                print(r.render())
                print()
            else:
                status = "ok" if r.ok else "FAIL"
                print(f"{r.label}   H: {r.subspace.describe()}   point: {r.point}   {status}")
        for lab, why in failures:
            print(f"FAILED {lab}: {why}", file=sys.stderr)
    if any(not r.ok for r in results) or failures:
        return EXIT_INTERNAL
    return EXIT_OK


def _formula_text(arg: str) -> str:
    path = Path(arg)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8")
    except OSError:
        pass
    return arg


def cmd_dp(args, ctx) -> int:
    pinned = {}
    for item in args.sort:
        name, sep, sort = item.partition("=")
        if not sep or sort.strip() not in ("VF", "RF", "Z"):
            raise UsageError(f"--sort expects NAME=VF|RF|Z, got {item!r}")
        pinned[name.strip()] = sort.strip()
    f = parse(_formula_text(args.formula), pinned)
    s = DPStructure(
        ctx,
        m=args.m,
        vf_window=args.vf_val_window,
        vf_digits=args.vf_digits,
        z_window=args.z_window,
        ring_mode=args.ring,
    )
    sorts = {v.name: v.sort for v in free_vars(f)}
    values = {}
    for item in args.set:
        name, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects NAME=VALUE, got {item!r}")
        name = name.strip()
        if name not in sorts:
            raise UsageError(f"{name} is not a free variable of the formula")
        if sorts[name] == "VF":
            values[name] = parse_element(raw, ctx)
        else:
            try:
                values[name] = int(raw)
            except ValueError:
                raise UsageError(f"{name} needs an integer value") from None
    res = evaluate(f, s, bind(f, **values))
    _emit(res.to_json())
    return EXIT_OK


def cmd_repro(args, ctx) -> int:
    res = EXAMPLES[args.example](ctx)
    if args.json:
        _emit(res.to_json())
    else:
        sys.stdout.write(res.text)
        for inst in res.instances:
            print("# " + ", ".join(f"{k}={v}" for k, v in inst.items() if k != "v"))
    if not res.ok:
        print(res.diff(), file=sys.stderr)
        return EXIT_INTERNAL
    print(f"golden file {args.example}.txt: identical", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "orbits": cmd_orbits,
    "qform": cmd_qform,
    "building": cmd_building,
    "match": cmd_match,
    "dp": cmd_dp,
    "repro": cmd_repro,
}


def _join_signed_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_signed_values(argv))
        ctx = _context(args)
        return COMMANDS[args.command](args, ctx)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInvariantError as exc:
        print(f"internal error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (FormulaError, NilmatchError, ValueError) as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> int:
    try:
        return run()
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
