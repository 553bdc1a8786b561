"""Number fields given by a monic integer polynomial, exact element arithmetic
in the power basis, and high-precision Archimedean embeddings."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
from mpmath import mp, mpf, mpc

DEFAULT_PRECISION = 192
PRECISION_CAP = 4096
_GUARD_BITS = 32


class UndecidedPrecision(ArithmeticError):
    """A sign could not be resolved before the precision cap."""


def cert_tol(prec: int) -> mpf:
    """Acceptance tolerance 2^(-prec/4) used for sign decisions at ``prec`` bits."""
    return mpf(2) ** (-(prec // 4))


def certified_min(evaluate: Callable[[int], Sequence[mpf]], prec: int, cap: int = PRECISION_CAP):
    """Decide the sign of ``min(evaluate(p))`` by precision escalation.

    Returns ``(sign, value)`` with sign in {-1, 0, 1}.  Zero is reported when the
    minimum has collapsed below 2^(-cap/2) at the cap, i.e. it behaves like an
    exact zero rather than a small number.
    """
    p = prec
    while True:
        with mpmath.workprec(p):
            m = min(evaluate(p))
            tol = cert_tol(p)
            if m > tol:
                return 1, m
            if m < -tol:
                return -1, m
            if p >= cap:
                if abs(m) <= mpf(2) ** (-(cap // 2)):
                    return 0, m
                raise UndecidedPrecision(f"sign of {mpmath.nstr(m, 5)} unresolved at {cap} bits")
        p = min(2 * p, cap)


# ---------------------------------------------------------------------------
# dense polynomials over Q, constant term first


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = [Fraction(c) for c in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = Fraction(b[-1])
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
    return _trim(q), a


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd over Q."""
    a, b = _trim(list(map(Fraction, a))), _trim(list(map(Fraction, b)))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a] if a else a


def _poly_xgcd(a: list, b: list) -> tuple[list, list]:
    """Return (g, s) with s*a = g mod b and g monic."""
    r0, r1 = _trim([Fraction(c) for c in a]), _trim([Fraction(c) for c in b])
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0]


def _horner(coeffs: Sequence[int], z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NumberField:
    poly: tuple[int, ...]
    r1: int
    r2: int
    roots: tuple
    precision_bits: int = DEFAULT_PRECISION
    cm: bool = False
    _root_cache: dict = field(default_factory=dict, repr=False)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def s(self) -> int:
        return self.r1 + self.r2

    @property
    def r(self) -> int:
        return self.s - 1

    @property
    def is_cm_or_totally_real(self) -> bool:
        return self.cm or self.r2 == 0

    @property
    def weights(self) -> tuple[int, ...]:
        return (1,) * self.r1 + (2,) * self.r2

    def __repr__(self) -> str:
        return f"NumberField(poly={list(self.poly)}, r1={self.r1}, r2={self.r2})"

    def same_field(self, other: "NumberField") -> bool:
        return self.poly == other.poly

    def element(self, coords: Iterable) -> "FieldElement":
        return FieldElement.from_coords(self, coords)

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    @property
    def zero(self) -> "FieldElement":
        return self.element([])

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([-self.poly[0]])
        return self.element([0, 1])

    def roots_at(self, prec: int) -> tuple:
        """Roots refined to ``prec`` bits by Newton iteration from the stored ones."""
        if prec <= self.precision_bits:
            return self.roots
        if prec not in self._root_cache:
            self._root_cache[prec] = tuple(
                _newton_polish(self.poly, z, prec, real=i < self.r1) for i, z in enumerate(self.roots)
            )
        return self._root_cache[prec]

    def with_embedding_order(self, order: Sequence[int]) -> "NumberField":
        """Same field with its s embeddings listed in ``order`` (real places stay first)."""
        order = list(order)
        if sorted(order) != list(range(self.s)):
            raise ValueError("order must be a permutation of the embedding indices")
        if any(order[i] >= self.r1 for i in range(self.r1)):
            raise ValueError("real embeddings must stay in the first r1 positions")
        return NumberField(self.poly, self.r1, self.r2, tuple(self.roots[i] for i in order),
                           self.precision_bits, self.cm)


def _newton_polish(poly: Sequence[int], z, prec: int, real: bool, max_iter: int = 200):
    deriv = [i * c for i, c in enumerate(poly)][1:]
    with mpmath.workprec(prec + _GUARD_BITS):
        z = mpf(z.real) if real else mpc(z)
        eps = mpf(2) ** (-prec - 8)
        for _ in range(max_iter):
            step = _horner(poly, z) / _horner(deriv, z)
            z -= step
            if abs(step) <= eps * (1 + abs(z)):
                return z
    raise ArithmeticError("root refinement did not converge")


def make_field(coeffs: Sequence[int], precision_bits: int = DEFAULT_PRECISION, cm: bool = False) -> NumberField:
    """Build a number field from a monic squarefree integer polynomial (constant term first).

    Roots are ordered real ascending, then complex roots with positive imaginary
    part by ascending real part (ties by imaginary part).
    """
    poly = tuple(int(c) for c in coeffs)
    if any(Fraction(c) != int(Fraction(c)) for c in coeffs):
        raise ValueError("coefficients must be integers")
    d = len(poly) - 1
    if d < 1:
        raise ValueError("degree must be at least 1")
    if poly[-1] != 1:
        raise ValueError("defining polynomial must be monic")
    deriv = [i * c for i, c in enumerate(poly)][1:]
    if d > 1 and len(poly_gcd(poly, deriv)) > 1:
        raise ValueError("defining polynomial has repeated roots")

    if d == 1:
        return NumberField(poly, 1, 0, (mpf(-poly[0]),), precision_bits, cm)

    work = precision_bits + _GUARD_BITS
    with mpmath.workprec(work):
        try:
            approx = mp.polyroots(list(reversed(poly)), maxsteps=400, extraprec=2 * work)
        except mpmath.libmp.NoConvergence as exc:
            raise ArithmeticError("root refinement did not converge") from exc
        scale = max(abs(z) for z in approx) + 1
        thresh = mpf(2) ** (-(precision_bits // 2)) * scale
        real = sorted(mpf(mpmath.re(z)) for z in approx if abs(mpmath.im(z)) <= thresh)
        upper = sorted((mpc(z) for z in approx if mpmath.im(z) > thresh),
                       key=lambda z: (z.real, z.imag))
    r1, r2 = len(real), len(upper)
    if r1 + 2 * r2 != d:
        raise ArithmeticError("could not separate real and complex roots")
    roots = tuple(_newton_polish(poly, z, precision_bits, real=True) for z in real) + tuple(
        _newton_polish(poly, z, precision_bits, real=False) for z in upper)

    with mpmath.workprec(work):
        bound = mpf(2) ** (-(precision_bits // 2))
        for z in roots:
            if abs(_horner(poly, z)) >= bound * (1 + abs(z)) ** d:
                raise ArithmeticError("root residual too large")
        for i, z in enumerate(roots):
            for w in roots[i + 1:]:
                if abs(z - w) <= bound:
                    raise ArithmeticError("roots not separated at this precision")
    return NumberField(poly, r1, r2, roots, precision_bits, cm)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Element of K stored as integer numerators over a common positive denominator."""

    field: NumberField
    num: tuple[int, ...]
    den: int = 1

    @classmethod
    def from_coords(cls, K: NumberField, coords: Iterable) -> "FieldElement":
        coords = [Fraction(c) for c in coords]
        d = K.degree
        if len(coords) > d:
            coords = _reduce(coords, K.poly)
        coords = coords + [Fraction(0)] * (d - len(coords))
        den = math.lcm(*(c.denominator for c in coords)) if coords else 1
        return cls._normalized(K, [int(c * den) for c in coords], den)

    @classmethod
    def _normalized(cls, K: NumberField, num: list[int], den: int) -> "FieldElement":
        if den < 0:
            num, den = [-c for c in num], -den
        g = math.gcd(den, *num)
        if g > 1:
            num, den = [c // g for c in num], den // g
        return cls(K, tuple(num), den)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self) -> int:
        return self.field.degree

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_integral(self) -> bool:
        """True when every power-basis coordinate is an integer."""
        return self.den == 1

    def _check(self, other) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_coords(self.field, [other])
        if not isinstance(other, FieldElement):
            return NotImplemented
        if not self.field.same_field(other.field):
            raise ValueError("elements belong to different fields")
        return other

    def __eq__(self, other) -> bool:
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.field.poly, self.num, self.den))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        den = self.den * other.den
        return FieldElement._normalized(
            self.field, [a * other.den + b * self.den for a, b in zip(self.num, other.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        prod = _poly_mul(list(self.num), list(other.num))
        return FieldElement._normalized(self.field, _reduce_int(prod, self.field.poly), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, s = _poly_xgcd(list(self.num), list(self.field.poly))
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor; defining polynomial is reducible")
        return FieldElement.from_coords(self.field, [c * self.den for c in s])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __repr__(self) -> str:
        return f"FieldElement({[str(c) for c in self.coords]})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = str(c)
            terms.append(coef + mono)
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _reduce_int(prod: list[int], poly: Sequence[int]) -> list[int]:
    d = len(poly) - 1
    prod = prod + [0] * max(d - len(prod), 0)
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d):
                prod[k - d + i] -= c * poly[i]
    return prod[:d]


def _reduce(coords: list[Fraction], poly: Sequence[int]) -> list[Fraction]:
    return _reduce_int(list(coords), poly)


def element_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](b)


def multiplication_matrix(x: FieldElement) -> list[list[int]]:
    """Integer matrix of multiplication by ``x.num`` on the power basis (columns are x*t^j)."""
    K = x.field
    d = K.degree
    cols = []
    col = list(x.num)
    for _ in range(d):
        cols.append(col)
        col = _reduce_int([0] + col, K.poly)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def exact_norm(x: FieldElement) -> Fraction:
    """N_{K/Q}(x), exactly, with sign."""
    d = x.field.degree
    return Fraction(_bareiss_det(multiplication_matrix(x)), x.den ** d)


def embeddings(x: FieldElement, prec: int | None = None) -> list:
    """Values sigma_j(x) for the s embeddings, each with relative accuracy about 2^-prec.

    Cancellation in the power-basis evaluation is detected a posteriori and the
    evaluation precision raised until every value is resolved.
    """
    K = x.field
    prec = prec or K.precision_bits
    if x.is_zero():
        return [mpf(0)] * K.s
    p = prec + _GUARD_BITS
    d = K.degree
    while True:
        roots = K.roots_at(p)
        with mpmath.workprec(p):
            vals, ok = [], True
            for z in roots:
                v = _horner(x.num, z)
                size = _horner([abs(c) for c in x.num], abs(z)) * d
                if v == 0 or abs(v) * mpf(2) ** (p - prec - 8) < size:
                    ok = False
                    need = int(mpmath.log(size / max(abs(v), mpf(2) ** (-p)), 2)) + prec + 16
                    p = max(need, p + _GUARD_BITS)
                    break
                vals.append(v / x.den)
            if ok:
                return vals


def log_embedding(x: FieldElement, prec: int | None = None) -> tuple[mpf, ...]:
    """(log|s_1(x)|, ..., 2 log|s_j(x)|, ...) with complex places doubled."""
    if x.is_zero():
        raise ValueError("log embedding of zero")
    prec = prec or x.field.precision_bits
    vals = embeddings(x, prec)
    with mpmath.workprec(prec + _GUARD_BITS):
        return tuple(w * mpmath.log(abs(v)) for w, v in zip(x.field.weights, vals))


def log_abs_embeddings(x: FieldElement, prec: int | None = None) -> tuple[mpf, ...]:
    """(log|s_j(x)|) for j = 1..s, unweighted."""
    if x.is_zero():
        raise ValueError("log embedding of zero")
    prec = prec or x.field.precision_bits
    vals = embeddings(x, prec)
    with mpmath.workprec(prec + _GUARD_BITS):
        return tuple(mpmath.log(abs(v)) for v in vals)


def parse_element(K: NumberField, items: Sequence) -> FieldElement:
    """Element from a list of d rationals given as ints or strings like ``"-3/4"``."""
    if len(items) != K.degree:
        raise ValueError(f"expected {K.degree} coordinates, got {len(items)}")
    try:
        return K.element(Fraction(str(c).strip()) for c in items)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed coordinate list {items!r}") from exc


def element_strings(x: FieldElement) -> list[str]:
    return [str(c) for c in x.coords]
