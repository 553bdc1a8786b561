"""Largeness of primes above p in Q(zeta_{p-1}), from the shipped fixtures."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .field import FieldElement, NumberField
from .search import LargenessReport, Status, classify_ideal
from .serialize import fixture_path, load_element, load_field, load_units

DESK_PRIMES = (5, 7, 11, 13, 17, 19, 31)
HEIGHT_PRIMES = (41, 67, 71)
EXPECTED_LARGE = frozenset({5, 7, 11, 13, 19, 31})


@dataclass
class SurveyRow:
    p: int
    m: int
    report: LargenessReport
    table: list[FieldElement] = field(default_factory=list)
    matches: list[bool] = field(default_factory=list)

    @property
    def large(self) -> bool:
        return self.report.status in (Status.STRICTLY_LARGE, Status.LARGE_BOUNDARY)


def survey_fixtures() -> dict:
    return json.loads(fixture_path("survey.json").read_text())


def galois_conjugate(x: FieldElement, k: int) -> FieldElement:
    """Image of x under t -> t^k."""
    K = x.field
    t_k = K.gen ** k
    out, power = K.zero, K.one
    for c in x.coords:
        if c:
            out = out + power * c
        power = power * t_k
    return out


def equivalent_up_to_galois_and_torsion(w: FieldElement, t: FieldElement, m: int) -> bool:
    """Whether w = zeta^j * sigma_k(t) for some j and some k prime to m, with zeta = t (the generator).

    Assumes the field is Q(zeta_m) presented by its cyclotomic polynomial, m even.
    """
    K = w.field
    zeta = K.gen
    roots = []
    z = K.one
    for _ in range(m):
        roots.append(z)
        z = z * zeta
    for k in range(1, m):
        if math.gcd(k, m) != 1:
            continue
        ratio = w / galois_conjugate(t, k)
        if any(ratio == r for r in roots):
            return True
    return False


def survey_prime(p: int, precision_bits: int | None = None, budget: int = 10**7) -> SurveyRow:
    fixtures = survey_fixtures()
    if str(p) not in fixtures:
        raise KeyError(f"no fixture for p = {p}")
    entry = fixtures[str(p)]
    K: NumberField = load_field(fixture_path(entry["field"]), precision_bits)
    x = load_element(K, entry["generator"])
    U = load_units(K, fixture_path(entry["units"])) if "units" in entry else None
    report = classify_ideal(x, U, 1, budget=budget)
    table = [load_element(K, t) for t in entry.get("table", [])]
    matches = [any(equivalent_up_to_galois_and_torsion(s.witness, t, entry["m"]) for t in table)
               for s in report.solutions]
    return SurveyRow(p, entry["m"], report, table, matches)


def run_survey(primes=DESK_PRIMES + HEIGHT_PRIMES, precision_bits: int | None = None) -> list[SurveyRow]:
    return [survey_prime(p, precision_bits) for p in primes]
