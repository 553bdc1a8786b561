"""pi-adic floor functions ("special types") built from a generator pi and a digit set.

Only degree-one, unramified primes are handled: the prime P = (pi) is described
by p and a simple root g of the defining polynomial mod p, so that reduction
mod P is t -> g and P-adic valuations are read off the Hensel lift of g in Z_p.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath import mpf

from .field import FieldElement, NumberField, embeddings, exact_norm, make_field
from .heights import is_large_element

MAX_DENOMINATOR_SHIFT = 64


def _vp(n: int, p: int) -> int:
    n, k = abs(n), 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@lru_cache(maxsize=256)
def _hensel(poly: tuple[int, ...], g: int, p: int, N: int) -> int:
    """Root of poly in Z/p^N lifting the simple root g mod p."""
    deriv = [i * c for i, c in enumerate(poly)][1:]
    t, k = g % p, 1
    while k < N:
        k = min(2 * k, N)
        mod = p ** k
        fp = sum(c * pow(t, i, mod) for i, c in enumerate(deriv)) % mod
        f = sum(c * pow(t, i, mod) for i, c in enumerate(poly)) % mod
        t = (t - f * pow(fp, -1, mod)) % mod
    return t


@dataclass(frozen=True, eq=False)
class SpecialType:
    field: NumberField
    pi: FieldElement
    digits: tuple[FieldElement, ...]
    p: int
    g: int
    _by_residue: dict = field(repr=False, default_factory=dict)
    _pi_unit: int = 0

    def residue(self, c: FieldElement) -> int:
        """Image in Z/p of a P-integral element."""
        v, u = padic_unit(c, self)
        if v < 0:
            raise ValueError("element is not integral at the prime")
        return 0 if v > 0 else u

    def digit_for(self, residue: int) -> FieldElement:
        return self._by_residue[residue % self.p]


def _value_mod(num: Sequence[int], poly, g: int, p: int, N: int) -> int:
    mod = p ** N
    t = _hensel(tuple(poly), g, p, N)
    return sum(c * pow(t, i, mod) for i, c in enumerate(num)) % mod


def padic_unit(alpha: FieldElement, T: SpecialType) -> tuple[int, int]:
    """(v, u) with alpha = p^v * unit in Z_p under t -> theta_p, u the unit mod p.

    ``alpha`` must be nonzero.  v is the P-adic valuation.
    """
    if alpha.is_zero():
        raise ValueError("zero has infinite valuation")
    p, K = T.p, alpha.field
    N = 8
    while True:
        val = _value_mod(alpha.num, K.poly, T.g, p, N)
        if val:
            va = _vp(val, p)
            ua = (val // p ** va) % p
            break
        N *= 2
    kden = _vp(alpha.den, p)
    m = alpha.den // p ** kden
    return va - kden, ua * pow(m, -1, p) % p


def valuation(alpha: FieldElement, T: SpecialType) -> int | None:
    """P-adic valuation of alpha; None for zero."""
    return None if alpha.is_zero() else padic_unit(alpha, T)[0]


def find_residue_root(pi: FieldElement, p: int) -> int:
    """A simple root g of the defining polynomial mod p with pi(g) = 0 mod p."""
    poly = pi.field.poly
    deriv = [i * c for i, c in enumerate(poly)][1:]
    if pi.den % p == 0:
        raise ValueError("pi is not integral at p")
    for g in range(p):
        if sum(c * pow(g, i, p) for i, c in enumerate(poly)) % p:
            continue
        if sum(c * pow(g, i, p) for i, c in enumerate(deriv)) % p == 0:
            continue
        if sum(c * pow(g, i, p) for i, c in enumerate(pi.num)) % p == 0:
            return g
    raise ValueError(f"no simple root mod {p} matches pi")


def make_special_type(K: NumberField, pi: FieldElement, digits: Sequence[FieldElement],
                      g: int | None = None) -> SpecialType:
    """Validate (K, pi, R): |N(pi)| = p prime, R a complete residue system mod (pi) containing 0."""
    norm = abs(exact_norm(pi))
    if norm.denominator != 1 or not pi.is_integral():
        raise ValueError("pi must be an algebraic integer")
    p = int(norm)
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"|N(pi)| = {p} is not prime")
    if g is None:
        g = find_residue_root(pi, p)
    if sum(c * pow(g, i, p) for i, c in enumerate(K.poly)) % p:
        raise ValueError(f"{g} is not a root of the defining polynomial mod {p}")
    deriv = [i * c for i, c in enumerate(K.poly)][1:]
    if sum(c * pow(g, i, p) for i, c in enumerate(deriv)) % p == 0:
        raise ValueError("ramified residue root; only unramified degree-one primes are supported")
    if sum(c * pow(g, i, p) for i, c in enumerate(pi.num)) % p:
        raise ValueError("pi does not reduce to 0 under t -> g; g describes another prime")

    digits = tuple(digits)
    if len(digits) != p:
        raise ValueError(f"digit set must have exactly {p} elements")
    if not any(c.is_zero() for c in digits):
        raise ValueError("digit set must contain 0")
    by_res = {}
    for c in digits:
        if not c.is_integral():
            raise ValueError(f"digit {c} is not integral")
        res = sum(a * pow(g, i, p) for i, a in enumerate(c.num)) % p
        if res in by_res:
            raise ValueError("digit set is not a complete residue system")
        by_res[res] = c
    probe = SpecialType(K, pi, digits, p, g)
    v, u = padic_unit(pi, probe)
    if v != 1:
        raise ValueError("pi does not generate the prime")
    return SpecialType(K, pi, digits, p, g, by_res, u)


def rational_field() -> NumberField:
    return make_field([0, 1])


def browkin_type(p: int) -> SpecialType:
    Q = rational_field()
    h = (p - 1) // 2
    return make_special_type(Q, Q.element([p]), [Q.element([c]) for c in range(-h, h + 1)], 0)


def ruban_type(p: int) -> SpecialType:
    Q = rational_field()
    return make_special_type(Q, Q.element([p]), [Q.element([c]) for c in range(p)], 0)


def roots_of_unity_digits(K: NumberField, order: int) -> list[FieldElement]:
    """{0} together with the powers zeta^0 .. zeta^(order-1) of the generator."""
    out, z = [K.zero], K.one
    for _ in range(order):
        out.append(z)
        z = z * K.gen
    return out


@dataclass
class DigitExpansion:
    valuation: int
    digits: list[FieldElement]
    remainder: FieldElement | None = None

    @property
    def indices(self) -> range:
        return range(self.valuation, self.valuation + len(self.digits))

    @property
    def terminated(self) -> bool:
        return self.remainder is not None and self.remainder.is_zero()

    def partial_sum(self, T: SpecialType, upto: int | None = None) -> FieldElement:
        """sum of c_j pi^j for j <= upto."""
        out = T.field.zero
        for j, c in zip(self.indices, self.digits):
            if upto is not None and j > upto:
                break
            if not c.is_zero():
                out = out + c * T.pi ** j
        return out


def _check_denominator(alpha: FieldElement, T: SpecialType) -> None:
    y = alpha
    for _ in range(MAX_DENOMINATOR_SHIFT + 1):
        if y.is_integral():
            return
        y = y * T.pi
    raise ValueError("alpha has a denominator away from the prime of the type")


def padic_digits(alpha: FieldElement, T: SpecialType, j_max: int) -> DigitExpansion:
    """Digits c_n0 .. c_jmax of alpha = sum c_j pi^j, stopping early if the remainder vanishes."""
    if alpha.is_zero():
        return DigitExpansion(0, [], alpha)
    _check_denominator(alpha, T)
    n0 = valuation(alpha, T)
    if j_max < n0:
        raise ValueError(f"j_max = {j_max} is below the valuation {n0}")
    rem, digits = alpha, []
    pi_pow = T.pi ** n0
    for j in range(n0, j_max + 1):
        if rem.is_zero():
            break
        v, u = padic_unit(rem, T)
        if v < j:
            raise ArithmeticError("remainder valuation dropped; digit set inconsistent")
        # alpha pi^-j = p^(v-j) * u * u_pi^-j in Z_p
        res = 0 if v > j else u * pow(T._pi_unit, -j, T.p) % T.p
        c = T.digit_for(res)
        digits.append(c)
        if not c.is_zero():
            rem = rem - c * pi_pow
        pi_pow = pi_pow * T.pi
    return DigitExpansion(n0, digits, rem)


def floor(alpha: FieldElement, T: SpecialType) -> FieldElement:
    """s(alpha): the expansion of alpha truncated after the pi^0 term."""
    if alpha.is_zero():
        return alpha
    _check_denominator(alpha, T)
    if valuation(alpha, T) > 0:
        return T.field.zero
    return padic_digits(alpha, T, 0).partial_sum(T, 0)


def boundedness_certificate(T: SpecialType) -> list[mpf]:
    """Per-embedding bound L*lam/(lam - 1) on |sigma(s(alpha))|, lam = |sigma(pi)|, L = max |sigma(c)|."""
    strict, _ = is_large_element(T.pi, strict=True)
    if not strict:
        raise ValueError("pi is not strictly large; no boundedness certificate")
    K = T.field
    prec = K.precision_bits
    lam = [abs(v) for v in embeddings(T.pi, prec)]
    nonzero = [c for c in T.digits if not c.is_zero()]
    per_digit = [[abs(v) for v in embeddings(c, prec)] for c in nonzero]
    with mpmath.workprec(prec):
        out = []
        for j in range(K.s):
            Lj = max(row[j] for row in per_digit)
            out.append(Lj * lam[j] / (lam[j] - 1))
        return out
