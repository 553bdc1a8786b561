"""Classify the prime ideals (p) = pi O for the cyclotomic survey fields.

For each prime p the field is Q(zeta_{p-1}) and pi is a fixed generator of a
degree-one prime above p.  Desk-scale primes go through the exhaustive box
search; the remaining ones are settled by the height pre-check.

    python3 scripts/run_survey.py [--precision BITS] [--json out.json] [p ...]
"""
import argparse
import json
import time

from largeness.serialize import report_to_dict
from largeness.survey import DESK_PRIMES, EXPECTED_LARGE, HEIGHT_PRIMES, survey_prime


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("primes", nargs="*", type=int, default=list(DESK_PRIMES + HEIGHT_PRIMES))
    ap.add_argument("--precision", type=int, default=None)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args()

    rows, dump = [], []
    print(f"{'p':>4} {'deg':>4} {'status':<20} {'stage':<16} {'cands':>6} {'time':>8}  witnesses")
    for p in args.primes:
        t0 = time.perf_counter()
        row = survey_prime(p, args.precision)
        dt = time.perf_counter() - t0
        rep = row.report
        wit = ", ".join(str(s.witness) for s in rep.solutions[:2])
        if len(rep.solutions) > 2:
            wit += f", ... ({len(rep.solutions)} total)"
        flag = ""
        if p in DESK_PRIMES + HEIGHT_PRIMES and row.large != (p in EXPECTED_LARGE):
            flag = "  (UNEXPECTED)"
        print(f"{p:>4} {row.m:>4} {rep.status.value:<20} {rep.stage:<16} {rep.candidates_tested:>6} "
              f"{dt:>7.2f}s  {wit}{flag}")
        rows.append(row)
        dump.append({"p": p, "large": row.large, "table_match": row.matches, "report": report_to_dict(rep)})

    large = sorted(r.p for r in rows if r.large)
    print(f"large: {large}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(dump, fh, indent=1)


if __name__ == "__main__":
    main()
