"""Logarithmic norm, Weil height of algebraic integers and element-level largeness."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mpf

from .field import (
    PRECISION_CAP,
    FieldElement,
    certified_min,
    exact_norm,
    log_abs_embeddings,
)


class Verdict(str, enum.Enum):
    STRICTLY_LARGE = "strictly_large"
    NOT_LARGE = "not_large"
    INCONCLUSIVE = "inconclusive"


def schinzel_constant(prec: int = 64) -> mpf:
    """Half the log of the golden ratio, 0.24060591253..."""
    with mpmath.workprec(prec):
        return mpmath.log((1 + mpmath.sqrt(5)) / 2) / 2


SCHINZEL_BOUND = schinzel_constant(256)


def _nonzero(x: FieldElement) -> None:
    if x.is_zero():
        raise ValueError("x must be nonzero")


def log_norm(x: FieldElement, prec: int | None = None) -> mpf:
    """log|N(x)| / d, from the exact norm."""
    _nonzero(x)
    n = abs(exact_norm(x))
    with mpmath.workprec(prec or x.field.precision_bits):
        return (mpmath.log(n.numerator) - mpmath.log(n.denominator)) / x.degree


def weil_height_integer(x: FieldElement, prec: int | None = None) -> mpf:
    """Absolute logarithmic Weil height of an algebraic integer.

    Only the Archimedean part is summed, so the value is meaningful when ``x``
    is integral; integrality is checked when the power basis already shows it.
    """
    _nonzero(x)
    K = x.field
    logs = log_abs_embeddings(x, prec)
    with mpmath.workprec(prec or K.precision_bits):
        total = sum(w * max(mpf(0), v) for w, v in zip(K.weights, logs))
        return total / K.degree


def is_unit(x: FieldElement) -> bool:
    return x.is_integral() and abs(exact_norm(x)) == 1


@lru_cache(maxsize=None)
def _phi_at_most(d: int) -> tuple[int, ...]:
    limit = 2 * d * d + 2
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:
            for k in range(p, limit + 1, p):
                phi[k] -= phi[k] // p
    return tuple(m for m in range(1, limit + 1) if phi[m] <= d)


def is_root_of_unity(x: FieldElement) -> bool:
    """Exact test x^m == 1 over every m with phi(m) <= d."""
    if x.is_zero() or not is_unit(x):
        return False
    one = x.field.one
    power, k = one, 0
    for m in _phi_at_most(x.degree):
        power = power * x ** (m - k)
        k = m
        if power == one:
            return True
    return False


def is_large_element(x: FieldElement, strict: bool = False, prec: int | None = None,
                     cap: int = PRECISION_CAP) -> tuple[bool, mpf]:
    """Whether every |sigma(x)| >= 1 (> 1 when ``strict``), with the minimal log modulus.

    Units are decided exactly (Kronecker): large iff a root of unity, never strict.
    Otherwise the sign of the minimum is certified by precision escalation and
    ``UndecidedPrecision`` is raised if it cannot be.
    """
    _nonzero(x)
    prec = prec or x.field.precision_bits
    if is_unit(x):
        if is_root_of_unity(x):
            return (not strict), mpf(0)
        margin = min(log_abs_embeddings(x, prec))
        return False, margin
    sign, margin = certified_min(lambda p: log_abs_embeddings(x, p), prec, cap)
    return (sign > 0 if strict else sign >= 0), margin


@dataclass(frozen=True)
class HeightReport:
    h: mpf
    n: mpf
    is_large_element: bool
    is_strictly_large_element: bool
    margin: mpf


def height_report(x: FieldElement, prec: int | None = None, cap: int = PRECISION_CAP) -> HeightReport:
    large, margin = is_large_element(x, False, prec, cap)
    strict, _ = is_large_element(x, True, prec, cap)
    return HeightReport(weil_height_integer(x, prec), log_norm(x, prec), large, strict, margin)


def schinzel_nonlarge(x: FieldElement) -> Verdict:
    """NOT_LARGE when n(x) is below the Schinzel height bound; needs K CM or totally real.

    The conclusion holds in the ground field and in every CM or totally real
    extension of it.
    """
    K = x.field
    if not K.is_cm_or_totally_real:
        raise ValueError("criterion needs a CM or totally real field")
    _nonzero(x)
    if not x.is_integral():
        raise ValueError("x must be an algebraic integer")
    if is_unit(x):
        raise ValueError("x is a unit, hence trivially large")
    return Verdict.NOT_LARGE if log_norm(x, 256) < SCHINZEL_BOUND else Verdict.INCONCLUSIVE


def _lucas_fib(k: int) -> tuple[int, int]:
    a, b = 2, 1  # Lucas L_0, L_1
    f0, f1 = 0, 1
    for _ in range(k):
        a, b = b, a + b
        f0, f1 = f1, f0 + f1
    return a, f0


def schinzel_fires_for_norm(norm: int, degree: int) -> bool:
    """Exact test of log(norm)/degree < (1/2) log((1+sqrt5)/2).

    Equivalent to 2*norm^2 < L_k + F_k*sqrt(5) with k = degree (golden ratio
    power written with Lucas and Fibonacci numbers).
    """
    lk, fk = _lucas_fib(degree)
    lhs = 2 * norm * norm - lk
    return lhs < 0 or lhs * lhs < 5 * fk * fk
