"""Command-line front end.

Exit codes: 0 success / certified, 2 bad input, 3 not certified, 4 budget
exceeded. JSON artifacts are written with sorted keys so identical inputs
give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .errors import AmoebaError, BudgetExceeded, NoFeasibleComponents, PolynomialFormatError
from .geometry import D_POLICIES, DEFAULT_STRICT_SLACK, approximate_spine, enumerate_components
from .ideals import DEFAULT_N_MAX, certify_outside_ideal
from .membership import Certificate, certify_outside, region_grid
from .polynomial import default_precision, load_polynomial
from .resultant import DEFAULT_TERM_BUDGET, general_cyclic_resultant_with_report
from .tropical import parse_valued, tropical_magnitude_list, tropical_membership, tropicalize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CERTIFIED = 3
EXIT_BUDGET = 4


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(obj, out: str | None, stdout: bool = False) -> None:
    text = _dump(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if stdout or not out:
        sys.stdout.write(text)


def _floats(text: str, count: int | None = None, what: str = "value") -> list[str]:
    """Comma-separated reals, returned as validated strings (full precision kept)."""
    parts = [p.strip() for p in text.split(",")]
    try:
        ok = all(math.isfinite(float(p)) for p in parts)
    except ValueError:
        ok = False
    if not ok:
        raise InputError(f"malformed {what}: {text!r}")
    if count is not None and len(parts) != count:
        raise InputError(f"{what} needs {count} comma-separated numbers, got {len(parts)}")
    return parts


def _ints(text: str, count: int, what: str) -> list[int]:
    try:
        vals = [int(p) for p in text.split(",")]
    except ValueError:
        raise InputError(f"malformed {what}: {text!r}") from None
    if len(vals) != count:
        raise InputError(f"{what} needs {count} comma-separated integers")
    return vals


def _load(path: str, bits: int):
    try:
        return load_polynomial(path, bits)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# ---------------------------------------------------------------------------
# commands


def cmd_certify(args) -> int:
    f = _load(args.file, args.precision)
    a = _floats(args.point, f.r, "point")
    result = certify_outside(f, a, args.eps, args.mode, n_override=args.n, slack=args.slack,
                             budget=args.budget, max_n=args.max_n)
    if isinstance(result, Certificate):
        out = result.to_json_dict()
        out["certified"] = True
        _emit(out, args.out, stdout=True)
        return EXIT_OK
    _emit(result.to_json_dict(), args.out, stdout=True)
    return EXIT_NOT_CERTIFIED


def cmd_raster(args) -> int:
    f = _load(args.file, args.precision)
    if f.r != 2:
        raise InputError("raster needs a polynomial in two variables")
    bbox = [float(v) for v in _floats(args.bbox, 4, "bbox")]
    W, H = _ints(args.res, 2, "res")
    grid = region_grid(f, bbox, (W, H), args.mode, args.n, slack=args.slack, budget=args.budget, jobs=args.jobs)
    lines = [f"# bbox={bbox[0]!r},{bbox[1]!r},{bbox[2]!r},{bbox[3]!r} res={W},{H} n={args.n} mode={args.mode}"]
    lines += [",".join(str(int(v)) for v in row) for row in grid]
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_components(args) -> int:
    f = _load(args.file, args.precision)
    records = enumerate_components(f, args.n, d_policy=args.d_policy, strict_slack=args.strict_slack,
                                   budget=args.budget)
    _emit({"n": args.n, "d_policy": args.d_policy, "components": [c.to_json_dict() for c in records]}, args.out)
    return EXIT_OK


def cmd_spine(args) -> int:
    f = _load(args.file, args.precision)
    T = approximate_spine(f, args.n, rule=args.rule, budget=args.budget)
    _emit(T.to_json_dict(), args.out)
    return EXIT_OK


def cmd_resultant(args) -> int:
    f = _load(args.file, args.precision)
    ns = _ints(args.n, f.r, "n") if "," in args.n else [int(args.n)] * f.r
    resf, report = general_cyclic_resultant_with_report(f, ns, budget=args.budget)
    out = resf.to_json_dict()
    out["filter"] = {
        "removed_offlattice": report.removed_offlattice,
        "removed_noise": report.removed_noise,
        "clean": report.clean,
    }
    _emit(out, args.out)
    return EXIT_OK


def cmd_ideal(args) -> int:
    gens = [_load(p, args.precision) for p in args.file]
    a = _floats(args.point, gens[0].r, "point")
    result = certify_outside_ideal(gens, a, args.eps, args.n_max, mode=args.mode, slack=args.slack,
                                   budget=args.budget)
    if isinstance(result, Certificate):
        out = result.to_json_dict()
        out["certified"] = True
        _emit(out, args.out)
        return EXIT_OK
    _emit(result.to_json_dict(), args.out)
    return EXIT_NOT_CERTIFIED


def cmd_tropical(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            vp = parse_valued(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    T = tropicalize(vp)
    out = {"tropical": T.to_json_dict()}
    if args.point is not None:
        x = [float(v) for v in _floats(args.point, T.r, "point")]
        weights = tropical_magnitude_list(T, x)
        out["point"] = x
        out["weights"] = [{"exp": list(e), "weight": w} for e, w in weights]
        out["in_hypersurface"] = tropical_membership(T, x, args.tie_tol)
    _emit(out, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (default: $AMOEBA_PRECISION_BITS or 256)")
    common.add_argument("--budget", type=int, default=DEFAULT_TERM_BUDGET,
                        help="cap on predicted resultant terms (default %(default)s)")

    slack = argparse.ArgumentParser(add_help=False)
    slack.add_argument("--slack", type=float, default=None,
                       help="log-domain margin a dominant term must clear (default 2^-(precision/2))")

    p = argparse.ArgumentParser(prog="amoebakit", description="Certified amoeba approximations.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", parents=[common, slack], help="certify a point outside the amoeba")
    c.add_argument("-f", "--file", required=True)
    c.add_argument("--point", required=True, help="a1,...,ar")
    c.add_argument("--eps", type=_positive, required=True)
    c.add_argument("--mode", default="lopsided", choices=["lopsided", "super", "superlopsided"])
    c.add_argument("--n", type=int, default=None, help="test this single order only")
    c.add_argument("--max-n", type=int, default=None, help="stop the schedule above this order")
    c.add_argument("--seed", type=int, default=0, help="accepted for interface uniformity; unused")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_certify)

    rs = sub.add_parser("raster", parents=[common, slack], help="CSV mask of certified cells (r = 2)")
    rs.add_argument("-f", "--file", required=True)
    rs.add_argument("--bbox", required=True, help="x0,y0,x1,y1")
    rs.add_argument("--res", required=True, help="W,H")
    rs.add_argument("--mode", default="la", choices=["la", "sa"])
    rs.add_argument("--n", type=int, default=1)
    rs.add_argument("--jobs", type=int, default=1)
    rs.add_argument("-o", "--out", required=True)
    rs.set_defaults(func=cmd_raster)

    cp = sub.add_parser("components", parents=[common], help="component polyhedra as JSON")
    cp.add_argument("-f", "--file", required=True)
    cp.add_argument("--n", type=int, default=1)
    cp.add_argument("--d-policy", default="terms", choices=list(D_POLICIES))
    cp.add_argument("--strict-slack", type=float, default=DEFAULT_STRICT_SLACK)
    cp.add_argument("--out", required=True)
    cp.set_defaults(func=cmd_components)

    sp = sub.add_parser("spine", parents=[common], help="approximate spine as a tropical polynomial")
    sp.add_argument("-f", "--file", required=True)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--rule", default="sa", choices=["sa", "la"])
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_spine)

    rt = sub.add_parser("resultant", parents=[common], help="cyclic resultant as polynomial JSON")
    rt.add_argument("-f", "--file", required=True)
    rt.add_argument("--n", required=True, help="one order, or n1,...,nr")
    rt.add_argument("--out", required=True)
    rt.set_defaults(func=cmd_resultant)

    idl = sub.add_parser("ideal", parents=[common, slack], help="certify a point outside an ideal's amoeba")
    idl.add_argument("-f", "--file", action="append", required=True, help="generator file (repeat)")
    idl.add_argument("--point", required=True)
    idl.add_argument("--eps", type=_positive, required=True)
    idl.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    idl.add_argument("--mode", default="lopsided", choices=["lopsided", "super", "superlopsided"])
    idl.add_argument("--out", required=True)
    idl.set_defaults(func=cmd_ideal)

    tp = sub.add_parser("tropical", help="tropicalize valuation data and query membership")
    tp.add_argument("-f", "--file", required=True)
    tp.add_argument("--point", default=None)
    tp.add_argument("--tie-tol", type=float, default=None)
    tp.add_argument("--out", required=True)
    tp.set_defaults(func=cmd_tropical)
    return p


_COORD_OPTIONS = ("--point", "--bbox")


def _attach_coordinates(argv: Sequence[str]) -> list[str]:
    # argparse reads "-1,-1" as a flag; glue it to its option as --point=-1,-1
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _COORD_OPTIONS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_coordinates(sys.argv[1:] if argv is None else argv))
    if getattr(args, "precision", None) is None and hasattr(args, "precision"):
        args.precision = default_precision()
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NoFeasibleComponents as exc:
        print(f"not certified: {exc}", file=sys.stderr)
        return EXIT_NOT_CERTIFIED
    except (InputError, PolynomialFormatError, ValueError, AmoebaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
