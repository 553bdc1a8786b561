"""Command line front end: check, bounds, floor, survey, height."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from .field import DEFAULT_PRECISION, PRECISION_CAP, UndecidedPrecision, element_strings, exact_norm
from .floor import boundedness_certificate, floor, make_special_type, padic_digits
from .heights import height_report, schinzel_nonlarge
from .search import DEFAULT_BUDGET, Status, brute_force_solutions, classify_ideal
from .serialize import load_element, load_field, load_units, decimal_string, read_document, report_to_dict
from .survey import DESK_PRIMES, EXPECTED_LARGE, HEIGHT_PRIMES, survey_prime
from .units import covering_radius_bounds, regulator, uniform_extension_degree

EXIT_CODES = {
    Status.STRICTLY_LARGE: 0,
    Status.NOT_LARGE: 1,
    Status.NORM_TOO_SMALL: 1,
    Status.LARGE_BOUNDARY: 2,
    Status.UNDECIDED_PRECISION: 3,
}
EXIT_INPUT_ERROR = 4


@dataclass
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION
    precision_cap: int = PRECISION_CAP
    budget: int = DEFAULT_BUDGET
    output: str = "human"
    box_width: int = 5
    oracle: bool = False
    explicit_precision: bool = False  # otherwise a field file's own precision_bits is kept

    @property
    def field_precision(self) -> int | None:
        return self.precision_bits if self.explicit_precision else None

    def __post_init__(self):
        if not 1 <= self.precision_bits <= self.precision_cap:
            raise ValueError("need 1 <= precision <= precision cap")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.output not in ("human", "json"):
            raise ValueError("output format must be 'human' or 'json'")


def _fmt(v) -> str:
    return f"{float(v):.5f}"


def _vec(vals) -> str:
    return "(" + ", ".join(_fmt(v) for v in vals) + ")"


def _emit(cfg: RunConfig, doc: dict, human: list[str]) -> None:
    if cfg.output == "json":
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(human))


def cmd_check(args, cfg: RunConfig) -> int:
    K = load_field(args.field, cfg.field_precision)
    U = load_units(K, args.units)
    x = load_element(K, args.element)
    report = classify_ideal(x, U, args.bound, budget=cfg.budget, cap=cfg.precision_cap)
    doc = report_to_dict(report)
    lines = [f"status: {report.status.value}", f"decided by: {report.stage}",
             f"|N(x)| = {abs(exact_norm(x))}"]
    if report.box is not None:
        lines.append(f"box: {list(report.box[0])} .. {list(report.box[1])}  "
                     f"({report.candidates_tested} candidates, bound {_fmt(report.bound_estimate)})")
    for exps, vals in report.rejected:
        lines.append(f"  rejected U = {exps}: UL+X = {_vec(vals)}")
    for sol in report.solutions:
        kind = "strict" if sol.strict else "boundary"
        lines.append(f"  solution U = {sol.exponents} ({kind}, margin {_fmt(sol.margin)}): {sol.witness}")
    lines += [f"note: {n}" for n in report.notes]

    if cfg.oracle and U.rank <= 3:
        brute = brute_force_solutions(x, args.bound, U, cfg.box_width)
        w = cfg.box_width
        inside = [e for e in report.exponent_vectors if all(-w <= v <= w for v in e)]
        agree = sorted(brute) == sorted(inside)
        doc["oracle"] = {"box_width": w, "solutions": [list(e) for e in brute], "agree": agree}
        lines.append(f"oracle [-{w},{w}]^{U.rank}: {len(brute)} solutions, {'agrees' if agree else 'DISAGREES'}")
    _emit(cfg, doc, lines)
    return EXIT_CODES[report.status]


def cmd_bounds(args, cfg: RunConfig) -> int:
    K = load_field(args.field, cfg.field_precision)
    U = load_units(K, args.units)
    b = covering_radius_bounds(U)
    j = uniform_extension_degree(U, b)
    R = regulator(U)
    num = lambda v: decimal_string(v, K.precision_bits)
    doc = {
        "rank": U.rank, "regulator": num(R), "volume": num(b.volume),
        "minima": [num(v) for v in b.minima],
        "rho_inf_lower_regulator": num(b.lower_regulator), "rho_inf_lower_minima": num(b.lower_minima),
        "rho_inf_upper": num(b.upper_minima), "uniform_extension_degree": j,
    }
    lines = [f"rank r = {U.rank}", f"regulator = {_fmt(R)}" + ("  (rank 0 convention)" if U.rank == 0 else "")]
    if U.rank:
        lines += [f"successive minima = {_vec(b.minima)}",
                  f"rho_inf in [{_fmt(b.lower)}, {_fmt(b.upper)}]"
                  f"  (1/2 R^(1/r) = {_fmt(b.lower_regulator)}, lambda_r/(2 sqrt s) = {_fmt(b.lower_minima)})"]
    else:
        lines.append("rho_inf = 0")
    lines.append(f"uniform extension degree j = {j}")
    _emit(cfg, doc, lines)
    return 0


def cmd_floor(args, cfg: RunConfig) -> int:
    K = load_field(args.field, cfg.field_precision)
    tdoc = read_document(args.type)
    pi = load_element(K, tdoc["pi"])
    T = make_special_type(K, pi, [load_element(K, c) for c in tdoc["digits"]], tdoc.get("g"))
    alpha = load_element(K, args.element)
    exp = padic_digits(alpha, T, args.j_max)
    s = floor(alpha, T)
    doc = {"p": T.p, "g": T.g, "valuation": exp.valuation,
           "digits": [{"index": j, "digit": element_strings(c)} for j, c in zip(exp.indices, exp.digits)],
           "terminated": exp.terminated, "floor": element_strings(s)}
    lines = [f"prime p = {T.p}, residue root g = {T.g}",
             "digits: [" + ", ".join(f"{c}@{j}" for j, c in zip(exp.indices, exp.digits)) + "]",
             f"floor: {s}"]
    try:
        cert = boundedness_certificate(T)
        doc["bound"] = [decimal_string(c, K.precision_bits) for c in cert]
        lines.append(f"bounded type: |sigma(s(alpha))| <= {_vec(cert)}")
    except ValueError:
        lines.append("pi is not strictly large: no boundedness certificate")
    _emit(cfg, doc, lines)
    return 0


def cmd_height(args, cfg: RunConfig) -> int:
    K = load_field(args.field, cfg.field_precision)
    x = load_element(K, args.element)
    rep = height_report(x, cap=cfg.precision_cap)
    num = lambda v: decimal_string(v, K.precision_bits)
    doc = {"h": num(rep.h), "n": num(rep.n), "large": rep.is_large_element,
           "strictly_large": rep.is_strictly_large_element, "margin": num(rep.margin)}
    lines = [f"h(x) = {_fmt(rep.h)}", f"n(x) = {_fmt(rep.n)}",
             f"large element: {rep.is_large_element} (strict: {rep.is_strictly_large_element}, "
             f"min log|sigma(x)| = {_fmt(rep.margin)})"]
    if K.is_cm_or_totally_real and x.is_integral() and abs(exact_norm(x)) != 1:
        verdict = schinzel_nonlarge(x)
        doc["schinzel"] = verdict.value
        lines.append(f"Schinzel height test: {verdict.value}")
    _emit(cfg, doc, lines)
    return 0


def cmd_survey(args, cfg: RunConfig) -> int:
    primes = args.primes or list(DESK_PRIMES + HEIGHT_PRIMES)
    rows, lines = [], []
    for p in primes:
        t0 = time.perf_counter()
        row = survey_prime(p, cfg.field_precision, cfg.budget)
        dt = time.perf_counter() - t0
        wit = [str(s.witness) for s in row.report.solutions]
        rows.append({"p": p, "m": row.m, "large": row.large, "status": row.report.status.value,
                     "stage": row.report.stage, "witnesses": [element_strings(s.witness) for s in row.report.solutions],
                     "table_match": row.matches, "seconds": round(dt, 3)})
        known = p in DESK_PRIMES + HEIGHT_PRIMES
        lines.append(f"p = {p:3d}  Q(zeta_{row.m}): {'large' if row.large else 'not large':9s} "
                     f"[{row.report.stage}]  {'; '.join(wit)}"
                     + (f"  table match: {all(row.matches)}" if wit else "")
                     + ("  (UNEXPECTED)" if known and (p in EXPECTED_LARGE) != row.large else ""))
    _emit(cfg, {"rows": rows}, lines)
    return 0


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--precision", type=int, default=None,
                   help=f"working precision in bits (env LARGENESS_PRECISION; default: the field file's, else {DEFAULT_PRECISION})")
    p.add_argument("--precision-cap", type=int, default=PRECISION_CAP)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum box size")
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.add_argument("--box-width", type=int, default=5, help="half-width of the brute-force oracle box")
    p.add_argument("--oracle", action="store_true", help="run the brute-force oracle and compare")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="largeness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="decide whether x O_K is large")
    c.add_argument("field")
    c.add_argument("units")
    c.add_argument("element", help='coordinates, e.g. "0,0,1,-1,0,0,0,-1" or a JSON array')
    c.add_argument("--bound", "-B", default="1", help="bound B (rational), default 1")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bounds", parents=[common], help="regulator, minima and covering-radius bracket")
    b.add_argument("field")
    b.add_argument("units")
    b.set_defaults(func=cmd_bounds)

    f = sub.add_parser("floor", parents=[common], help="pi-adic digits and floor of an element")
    f.add_argument("field")
    f.add_argument("type", help='JSON file {"pi": element, "digits": [elements], "g": int}')
    f.add_argument("element")
    f.add_argument("--j-max", type=int, default=0)
    f.set_defaults(func=cmd_floor)

    s = sub.add_parser("survey", parents=[common], help="largeness of primes above p in Q(zeta_{p-1})")
    s.add_argument("primes", nargs="*", type=int)
    s.set_defaults(func=cmd_survey)

    h = sub.add_parser("height", parents=[common], help="Weil height, log norm and element largeness")
    h.add_argument("field")
    h.add_argument("element")
    h.set_defaults(func=cmd_height)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        env = os.environ.get("LARGENESS_PRECISION")
        if args.precision is None and env:
            args.precision = int(env)
        explicit = args.precision is not None
        cfg = RunConfig(args.precision if explicit else DEFAULT_PRECISION, args.precision_cap, args.budget,
                        args.format, args.box_width, args.oracle, explicit)
        return args.func(args, cfg)
    except UndecidedPrecision as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_CODES[Status.UNDECIDED_PRECISION]
    except (ValueError, KeyError, OSError, ArithmeticError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
