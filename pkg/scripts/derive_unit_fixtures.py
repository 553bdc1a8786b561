"""Derive the cyclotomic unit and prime-generator fixtures with PARI/GP.

Requires the ``cypari`` wheel (not a runtime dependency of the package):

    pip install cypari
    python scripts/derive_unit_fixtures.py

Writes ``zeta<m>.field.json``, ``zeta<m>.units.json`` and ``survey.json``
into ``src/largeness/fixtures``.  The Q(zeta16) units are the standard
ones and PARI returns exactly those, which the script asserts.
"""
import json
import sys
from pathlib import Path

from cypari import pari

OUT = Path(__file__).resolve().parents[1] / "src" / "largeness" / "fixtures"

# p -> conductor m = p - 1, for the primes with Q(zeta_{p-1}) of class number one
# that are handled at desk scale (units needed) or by the height pre-check only.
WITH_UNITS = {5: 4, 7: 6, 11: 10, 13: 12, 17: 16, 19: 18, 31: 30}
GENERATOR_ONLY = {41: 40, 67: 66, 71: 70}

REFERENCE_P17_GENERATOR = [0, 0, 1, -1, 0, 0, 0, -1]  # -z^7 - z^3 + z^2
REFERENCE_ZETA16_UNITS = [
    [-1, 0, 1, 0, 0, 0, -1, 0],
    [1, 1, 1, 0, 0, 0, 0, 0],
    [0, -1, 0, 1, 0, 0, -1, 0],
]

SCRAMBLE = (2, -1, 1)

# Strictly large elements of norm p, written in zeta = zeta_{p-1}.
TABLE = {
    5: [[1, 2]],
    7: [[-3, 1]],
    11: [[-1, 0, 0, 2], [1, -1, 2, 0]],
    13: [[0, 0, -1, -2], [2, 0, -1, 1]],
    19: [[1, 1, 1, -1, -1, 0]],
    31: [[0, -1, 0, -1, 0, 0, 0, -1], [-1, 1, 1, 1, 0, -1, -1, 0]],
}


def coeffs(polmod, d):
    lift = pari.lift(polmod)
    out = [int(pari.polcoef(lift, i)) for i in range(d)]
    return out


def strs(v):
    return [str(c) for c in v]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    survey = {}
    for p, m in sorted({**WITH_UNITS, **GENERATOR_ONLY}.items()):
        f = pari(f"polcyclo({m}, x)")
        d = int(pari.poldegree(f))
        poly = [int(pari.polcoef(f, i)) for i in range(d + 1)]
        field = {"poly": poly, "cm": True, "precision_bits": 192}
        (OUT / f"zeta{m}.field.json").write_text(json.dumps(field) + "\n")
        print(f"p={p} m={m} d={d}", file=sys.stderr)

        bnf = pari.bnfinit(f, 1)
        dec = pari.idealprimedec(bnf, p)
        if p == 17:
            gen = REFERENCE_P17_GENERATOR
        else:
            res = pari.bnfisprincipal(bnf, dec[0], 1)
            assert all(int(e) == 0 for e in res[0])
            gen = pari.Mod(pari.nfbasistoalg(bnf, res[1]), f)
            if p in WITH_UNITS:
                # hide the large generator behind a fixed unit so the search has work to do
                for u, e in zip(pari("(b) -> b.fu")(bnf), SCRAMBLE):
                    gen = gen * u ** e
            gen = coeffs(gen, d)
        entry = {"m": m, "field": f"zeta{m}.field.json", "generator": strs(gen)}

        if p in WITH_UNITS:
            tu = pari("(b) -> b.tu")(bnf)
            order = int(tu[0])
            tors = coeffs(tu[1], d)
            fu = [coeffs(u, d) for u in pari("(b) -> b.fu")(bnf)]
            if m == 16:
                assert fu == REFERENCE_ZETA16_UNITS, fu
            units = {
                "torsion": {"gen": strs(tors), "order": order},
                "free": [strs(u) for u in fu],
            }
            (OUT / f"zeta{m}.units.json").write_text(json.dumps(units) + "\n")
            entry["units"] = f"zeta{m}.units.json"
        entry["table"] = [strs(t + [0] * (d - len(t))) for t in TABLE.get(p, [])]
        survey[str(p)] = entry

    (OUT / "survey.json").write_text(json.dumps(survey, indent=2) + "\n")


if __name__ == "__main__":
    main()
