"""JSON documents: fields, elements, unit groups, special types and reports."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import mpmath
from mpmath import mpf

from .field import DEFAULT_PRECISION, FieldElement, NumberField, element_strings, make_field, parse_element
from .search import LargenessReport, Solution, Status
from .units import UnitGroup, build_unit_group


def read_document(src) -> dict:
    if isinstance(src, dict):
        return src
    return json.loads(Path(src).read_text())


def fixture_path(name: str) -> Path:
    return Path(resources.files("largeness") / "fixtures" / name)


def load_field(src, precision_bits: int | None = None) -> NumberField:
    """Field from ``{"poly": [c0, ..., cd], "cm": bool, "precision_bits": int}``."""
    doc = read_document(src)
    try:
        poly = [int(c) for c in doc["poly"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("field document needs an integer list 'poly'") from exc
    prec = precision_bits or int(doc.get("precision_bits", DEFAULT_PRECISION))
    return make_field(poly, prec, bool(doc.get("cm", False)))


def field_to_dict(K: NumberField) -> dict:
    return {"poly": list(K.poly), "cm": K.cm, "precision_bits": K.precision_bits}


def load_element(K: NumberField, src) -> FieldElement:
    """Element from a list of d rationals, a JSON array string or a comma-separated string."""
    if isinstance(src, str):
        text = src.strip()
        if text.startswith("["):
            try:
                src = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed element {text!r}") from exc
        else:
            src = [t for t in text.split(",")]
    if not isinstance(src, (list, tuple)):
        raise ValueError("element must be a list of coordinates")
    return parse_element(K, src)


def load_units(K: NumberField, src) -> UnitGroup:
    """Unit group from ``{"torsion": {"gen": element, "order": int}, "free": [element, ...]}``."""
    doc = read_document(src)
    tors = doc["torsion"]
    return build_unit_group(K, load_element(K, tors["gen"]), int(tors["order"]),
                            [load_element(K, u) for u in doc.get("free", [])])


def units_to_dict(U: UnitGroup) -> dict:
    return {"torsion": {"gen": element_strings(U.torsion_gen), "order": U.torsion_order},
            "free": [element_strings(u) for u in U.free_gens]}


def decimal_string(v: mpf, prec: int) -> str:
    """Decimal digits enough to recover a prec-bit value exactly."""
    return mpmath.nstr(v, int(prec * 0.30103) + 3)


def report_to_dict(report: LargenessReport) -> dict:
    prec = report.precision or DEFAULT_PRECISION
    with mpmath.workprec(prec):
        return {
            "status": report.status.value,
            "stage": report.stage,
            "precision": report.precision,
            "candidates_tested": report.candidates_tested,
            "bound_estimate": None if report.bound_estimate is None else decimal_string(report.bound_estimate, prec),
            "box": None if report.box is None else [list(report.box[0]), list(report.box[1])],
            "solutions": [
                {"exponents": list(s.exponents), "torsion_exponent": s.torsion_exponent,
                 "witness": element_strings(s.witness), "margin": decimal_string(s.margin, prec), "strict": s.strict}
                for s in report.solutions
            ],
            "rejected": [{"exponents": list(u), "values": [decimal_string(v, prec) for v in vals]}
                         for u, vals in report.rejected],
            "notes": list(report.notes),
        }


def report_from_dict(doc: dict, K: NumberField) -> LargenessReport:
    prec = doc.get("precision") or DEFAULT_PRECISION
    with mpmath.workprec(prec):
        sols = [Solution(tuple(s["exponents"]), int(s["torsion_exponent"]), load_element(K, s["witness"]),
                         mpf(s["margin"]), bool(s["strict"])) for s in doc.get("solutions", [])]
        box = doc.get("box")
        return LargenessReport(
            status=Status(doc["status"]),
            solutions=sols,
            candidates_tested=int(doc.get("candidates_tested", 0)),
            bound_estimate=None if doc.get("bound_estimate") is None else mpf(doc["bound_estimate"]),
            stage=doc.get("stage", ""),
            precision=doc.get("precision", 0),
            box=None if box is None else (tuple(box[0]), tuple(box[1])),
            rejected=[(tuple(r["exponents"]), tuple(mpf(v) for v in r["values"])) for r in doc.get("rejected", [])],
            notes=list(doc.get("notes", [])),
        )


def reports_equal(a: LargenessReport, b: LargenessReport) -> bool:
    """Structural equality; witnesses compared as field elements."""
    keys = ("status", "candidates_tested", "bound_estimate", "stage", "precision", "box", "rejected", "notes")
    if any(getattr(a, k) != getattr(b, k) for k in keys):
        return False
    return len(a.solutions) == len(b.solutions) and all(
        (s.exponents, s.torsion_exponent, s.margin, s.strict) == (t.exponents, t.torsion_exponent, t.margin, t.strict)
        and s.witness == t.witness for s, t in zip(a.solutions, b.solutions))
