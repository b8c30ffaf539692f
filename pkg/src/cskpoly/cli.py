"""Command-line interface: ``cskpoly <family|poly|verify|density>``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .characterization import SUITES, run_suite
from .errors import CSKError, InvalidVariance, OutOfDomain
from .measures import (
    VarianceSpec,
    ac_support,
    classify_family,
    jacobi_from_quadratic,
)
from .polynomials import assoc_from_density, monic_sequence
from .transforms import atoms, domain_of_means, qm_density, stieltjes_density

SCHEMA_VERSION = "1"
MAX_POLY_N = 64

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_text(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def encode(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON: rationals as "p/q", floats with 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_text(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(encode(v, indent + 1) for v in obj) + "]"
        items = [pad + encode(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


_RATIONAL_FLAGS = ("--a0", "--a1", "--a2", "--m")


def _join_negative_rationals(argv: Sequence[str]) -> list[str]:
    # argparse reads "-1/2" as an option; bind it to the preceding flag
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _RATIONAL_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def _spec(args) -> VarianceSpec:
    return VarianceSpec(args.a0, args.a1, args.a2)


def _spec_inputs(args) -> dict:
    return {"a0": args.a0, "a1": args.a1, "a2": args.a2}


def cmd_family(args) -> tuple[dict, int]:
    spec = _spec(args)
    j = jacobi_from_quadratic(spec)
    dom = domain_of_means(j)
    support = ac_support(j)
    results = {
        "type": classify_family(spec).value,
        "jacobi": {
            "alpha_head": list(j.alpha_head),
            "alpha_tail": j.alpha_tail,
            "beta_head": list(j.beta_head),
            "beta_tail": j.beta_tail,
            "terminates_at": j.terminates_at,
        },
        "support": list(support) if support is not None else None,
        "atoms": [{"x": x, "mass": w} for x, w in atoms(j)],
        "means_domain": [dom.m_minus, dom.m_plus],
        "theta_domain": [dom.theta_minus, dom.theta_plus],
        "support_hull": [dom.A, dom.B],
    }
    return {"inputs": _spec_inputs(args), "results": results}, EXIT_OK


def _poly_rows(args):
    spec = _spec(args)
    if args.kind == "assoc":
        return assoc_from_density(spec, args.n)
    return monic_sequence(jacobi_from_quadratic(spec), args.n, spec)


def cmd_poly(args) -> tuple[dict, int]:
    if not 0 <= args.n <= MAX_POLY_N:
        raise UsageError(f"--n must lie in [0, {MAX_POLY_N}]")
    seq = _poly_rows(args)
    inputs = dict(_spec_inputs(args), n=args.n, kind=args.kind)
    results = {"rows": [list(r) for r in seq], "terminated_at": seq.terminated_at}
    return {"inputs": inputs, "results": results}, EXIT_OK


def poly_csv(doc: dict) -> str:
    lines = ["n,k,coeff"]
    for n, row in enumerate(doc["results"]["rows"]):
        lines.extend(f"{n},{k},{c}" for k, c in enumerate(row))
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> tuple[dict, int]:
    reports = run_suite(args.suite, N=args.n, tol=args.tol)
    passed = all(r.passed for r in reports)
    inputs = {"suite": args.suite, "n": args.n, "tol": args.tol}
    results = {"total": len(reports), "passed": sum(r.passed for r in reports), "all_passed": passed}
    doc = {"inputs": inputs, "results": results, "reports": [r.to_dict() for r in reports]}
    return doc, EXIT_OK if passed else EXIT_FAIL


def cmd_density(args) -> tuple[dict, int]:
    spec = _spec(args)
    j = jacobi_from_quadratic(spec)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    support = ac_support(j)
    if support is None:
        raise UsageError("measure is purely atomic; no density to tabulate")
    m = args.m
    dom = domain_of_means(j)
    if not dom.contains_mean(m):
        raise OutOfDomain(f"m={m} outside ({dom.m_minus}, {dom.m_plus})")
    rows = []
    for x in np.linspace(support[0], support[1], args.grid):
        x = float(x)
        d = max(stieltjes_density(j, x), 0.0)
        f = float(qm_density(spec, float(m), x))
        rows.append({"x": x, "nu_density": d, "f": f, "product": d * f})
    inputs = dict(_spec_inputs(args), m=m, grid=args.grid)
    return {"inputs": inputs, "results": {"rows": rows}}, EXIT_OK


def density_csv(doc: dict) -> str:
    lines = ["x,nu_density,f,product"]
    for r in doc["results"]["rows"]:
        lines.append(",".join(format(r[k], ".17g") for k in ("x", "nu_density", "f", "product")))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cskpoly", description="Quadratic CSK families and their polynomials.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def spec_flags(p):
        p.add_argument("--a0", type=_rational, required=True)
        p.add_argument("--a1", type=_rational, default=Fraction(0))
        p.add_argument("--a2", type=_rational, default=Fraction(0))
        p.add_argument("--out", help="write the document to FILE instead of stdout")

    p = sub.add_parser("family", help="describe the family of a pseudo-variance")
    spec_flags(p)

    p = sub.add_parser("poly", help="coefficient table of P_n or T_n")
    spec_flags(p)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--kind", choices=("assoc", "monic"), default="assoc")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="run characterization checks")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out")

    p = sub.add_parser("density", help="tabulate nu and Q_m densities")
    spec_flags(p)
    p.add_argument("--m", type=_rational, default=Fraction(0))
    p.add_argument("--grid", type=int, default=21)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


COMMANDS = {"family": cmd_family, "poly": cmd_poly, "verify": cmd_verify, "density": cmd_density}
CSV_WRITERS = {"poly": poly_csv, "density": density_csv}


def _error(kind: str, message: str) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "error": {"type": kind, "message": message}}
    sys.stderr.write(encode(doc) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_rationals(sys.argv[1:] if argv is None else argv))
        body, code = COMMANDS[args.command](args)
    except UsageError as exc:
        _error("UsageError", str(exc))
        return EXIT_USAGE
    except (InvalidVariance, OutOfDomain) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_USAGE
    except CSKError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_FAIL
    doc = {"schema_version": SCHEMA_VERSION, "command": args.command, **body}
    fmt = getattr(args, "format", "json")
    text = CSV_WRITERS[args.command](doc) if fmt == "csv" else encode(doc) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
