"""Walk through the box search for the prime above 17 in Q(zeta16).

Prints L, M, N^+, N^-, X, the exponent box and UL + X for the single
candidate, in the column order used by the printed worked example
(canonical embeddings permuted by [0, 3, 1, 2]).

    python3 scripts/reproduce_p17.py [--precision BITS]
"""
import argparse
import time

import mpmath

from largeness.search import build_problem, classify_ideal
from largeness.serialize import fixture_path, load_field, load_units

GENERATOR = [0, 0, 1, -1, 0, 0, 0, -1]  # z^2 - z^3 - z^7
COLUMN_ORDER = [0, 3, 1, 2]


def show(name, rows):
    print(f"{name} =")
    for row in rows:
        print("   " + "  ".join(f"{float(v):9.5f}" for v in row))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--precision", type=int, default=None)
    args = ap.parse_args()

    t0 = time.perf_counter()
    K = load_field(fixture_path("zeta16.field.json"), args.precision).with_embedding_order(COLUMN_ORDER)
    U = load_units(K, fixture_path("zeta16.units.json"))
    x = K.element(GENERATOR)
    P = build_problem(x, 1, U)
    report = classify_ideal(x, U)
    elapsed = time.perf_counter() - t0

    show("L", U.L)
    show("M", P.M)
    show("N+", P.N_plus)
    show("N-", P.N_minus)
    show("X", [P.X])
    show("-X N+", [P.lower])
    show("-X N-", [P.upper])
    print(f"box: {P.box_lo} .. {P.box_hi}  ({P.box_size} candidate)")
    for exps, vals in report.rejected:
        show(f"UL + X at U = {exps}", [vals])
    print(f"status: {report.status.value} (stage {report.stage}, {report.precision} bits)")
    print(f"enumeration bound: {mpmath.nstr(report.bound_estimate, 8)}")
    print(f"time: {elapsed * 1000:.1f} ms")


if __name__ == "__main__":
    main()
