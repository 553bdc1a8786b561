"""The log-lattice of units: regulator, successive minima, covering-radius bracket."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .field import FieldElement, NumberField, exact_norm, log_embedding, make_field, DEFAULT_PRECISION
from .heights import Verdict, is_large_element, is_unit, log_norm

MAX_MINIMA_RANK = 4
LV_TOL_BITS = 86


class EnumerationBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class UnitGroup:
    field: NumberField
    torsion_gen: FieldElement
    torsion_order: int
    free_gens: tuple[FieldElement, ...]
    L: tuple[tuple[mpf, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.free_gens)

    def power_product(self, exponents: Sequence[int]) -> FieldElement:
        """prod u_i^{e_i} over the free generators, exactly."""
        out = self.field.one
        for u, e in zip(self.free_gens, exponents):
            if e:
                out = out * u ** e
        return out


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def build_unit_group(K: NumberField, torsion_gen: FieldElement, torsion_order: int,
                     free: Sequence[FieldElement]) -> UnitGroup:
    """Validate the generators and tabulate L (rows = log embeddings of the free units)."""
    free = tuple(free)
    if len(free) != K.r:
        raise ValueError(f"expected r = {K.r} free generators, got {len(free)}")
    for g in (torsion_gen, *free):
        if not g.field.same_field(K):
            raise ValueError("generator from a different field")
        if not is_unit(g):
            raise ValueError(f"{g} is not a unit (norm {exact_norm(g)})")
    one = K.one
    if torsion_order < 1 or torsion_gen ** torsion_order != one:
        raise ValueError("torsion generator does not have the stated order")
    for q in _prime_factors(torsion_order):
        if torsion_gen ** (torsion_order // q) == one:
            raise ValueError("torsion generator has smaller order than stated")

    prec = K.precision_bits
    L = tuple(log_embedding(u, prec) for u in free)
    with mpmath.workprec(prec):
        tol = mpf(2) ** (-LV_TOL_BITS)
        for row in L:
            if abs(sum(row)) > tol * max(1, max(abs(v) for v in row)):
                raise ArithmeticError("L V != 0; a generator is not a unit")
        if K.r:
            det = mpmath.det(mpmath.matrix([list(row[:-1]) for row in L]))
            if abs(det) <= mpf("1e-20"):
                raise ValueError("free generators are multiplicatively dependent")
    return UnitGroup(K, torsion_gen, torsion_order, free, L)


def regulator(U: UnitGroup) -> mpf:
    """|det| of L with one column removed; 1 for rank 0 by convention.

    Every column choice is computed and required to agree to 1e-10 relative.
    """
    if U.rank == 0:
        return mpf(1)
    with mpmath.workprec(U.field.precision_bits):
        dets = []
        for j in range(U.field.s):
            sub = [[v for k, v in enumerate(row) if k != j] for row in U.L]
            dets.append(abs(mpmath.det(mpmath.matrix(sub))))
        ref = dets[-1]
        if any(abs(d - ref) > mpf("1e-10") * ref for d in dets):
            raise ArithmeticError("regulator depends on the deleted column")
        return ref


def _integer_rank(vectors: list[tuple[int, ...]]) -> int:
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def short_vectors(basis: Sequence[Sequence[mpf]], radius2: float, budget: int = 10**6) -> list[tuple[int, ...]]:
    """Integer coefficient vectors c != 0 with |c B|^2 <= radius2 (one of each +-c pair).

    Fincke-Pohst enumeration on the Cholesky form of the Gram matrix.
    """
    B = np.array([[float(v) for v in row] for row in basis])
    n = B.shape[0]
    G = B @ B.T
    R = np.linalg.cholesky(G).T  # G = R^T R, R upper triangular
    q = np.diag(R) ** 2
    mu = R / np.diag(R)[:, None]
    found: list[tuple[int, ...]] = []
    x = [0] * n
    nodes = 0

    def rec(i: int, rest: float) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationBudgetExceeded(f"short-vector enumeration exceeded {budget} nodes")
        centre = -sum(mu[i, j] * x[j] for j in range(i + 1, n))
        half = math.sqrt(max(rest, 0.0) / q[i])
        for xi in range(math.ceil(centre - half - 1e-9), math.floor(centre + half + 1e-9) + 1):
            x[i] = xi
            used = q[i] * (xi - centre) ** 2
            if used > rest + 1e-9 * radius2:
                continue
            if i == 0:
                if any(x):
                    found.append(tuple(x))
            else:
                rec(i - 1, rest - used)
        x[i] = 0

    rec(n - 1, radius2)
    # keep the representative whose last nonzero entry is positive
    return [c for c in found if next(v for v in reversed(c) if v) > 0]


def _lattice_norm(U: UnitGroup, c: Sequence[int]) -> mpf:
    with mpmath.workprec(U.field.precision_bits):
        vec = [sum(ci * U.L[i][j] for i, ci in enumerate(c)) for j in range(U.field.s)]
        return mpmath.sqrt(sum(v * v for v in vec))


def successive_minima(U: UnitGroup, max_rank: int = MAX_MINIMA_RANK, budget: int = 10**6):
    """Euclidean successive minima of the unit lattice, with realising exponent vectors.

    Returns ``(minima, vectors)``.
    """
    r = U.rank
    if r == 0:
        return [], []
    if r > max_rank:
        raise ValueError(f"rank {r} exceeds the enumeration cap {max_rank}")
    radius = max(_lattice_norm(U, [int(i == k) for i in range(r)]) for k in range(r))
    cands = short_vectors(U.L, float(radius) ** 2 * (1 + 1e-9), budget)
    cands.sort(key=lambda c: (_lattice_norm(U, c), c))
    minima, chosen = [], []
    for c in cands:
        if _integer_rank(chosen + [c]) > len(chosen):
            chosen.append(c)
            minima.append(_lattice_norm(U, c))
            if len(chosen) == r:
                break
    return minima, chosen


@dataclass(frozen=True)
class CoveringRadiusBounds:
    """Certified bracket for the L-infinity covering radius of the unit lattice."""

    lower_regulator: mpf
    lower_minima: mpf
    upper_minima: mpf
    regulator: mpf
    minima: tuple[mpf, ...]
    volume: mpf
    rank: int

    @property
    def lower(self) -> mpf:
        return max(self.lower_regulator, self.lower_minima)

    @property
    def upper(self) -> mpf:
        return self.upper_minima


def covering_radius_bounds(U: UnitGroup) -> CoveringRadiusBounds:
    K = U.field
    R = regulator(U)
    with mpmath.workprec(K.precision_bits):
        if U.rank == 0:
            zero = mpf(0)
            return CoveringRadiusBounds(zero, zero, zero, R, (), mpmath.sqrt(K.s) * R, 0)
        minima, _ = successive_minima(U)
        lam_r, rs = minima[-1], mpmath.sqrt(K.s)
        return CoveringRadiusBounds(
            lower_regulator=R ** (mpf(1) / U.rank) / 2,
            lower_minima=lam_r / (2 * rs),
            upper_minima=rs / 2 * lam_r,
            regulator=R,
            minima=tuple(minima),
            volume=rs * R,
            rank=U.rank,
        )


def covering_radius_from_heights(K: NumberField, mu: float, n: int) -> mpf:
    """Lower bound (d/s) mu^(1/n) for the covering radius, given a claimed lower bound
    ``mu`` for products of heights of n independent units."""
    if not 1 <= n <= K.r:
        raise ValueError("n must lie in 1..r")
    with mpmath.workprec(K.precision_bits):
        return mpf(K.degree) / K.s * mpf(mu) ** (mpf(1) / n)


def sufficient_largeness(x: FieldElement, U: UnitGroup, bounds: CoveringRadiusBounds | None = None) -> Verdict:
    """STRICTLY_LARGE when n(x) exceeds the certified upper bound on the covering radius."""
    if x.is_zero():
        raise ValueError("x must be nonzero")
    if is_unit(x):
        raise ValueError("x is a unit; n(x) = 0 never exceeds the covering radius")
    if U.rank == 0:
        strict, _ = is_large_element(x, strict=True)
        return Verdict.STRICTLY_LARGE if strict else Verdict.INCONCLUSIVE
    bounds = bounds or covering_radius_bounds(U)
    return Verdict.STRICTLY_LARGE if log_norm(x) > bounds.upper_minima else Verdict.INCONCLUSIVE


def uniform_extension_degree(U: UnitGroup, bounds: CoveringRadiusBounds | None = None) -> int:
    """Smallest integer j > rho * d / log 2, using the upper end of the bracket for rho."""
    if U.rank == 0:
        return 1
    bounds = bounds or covering_radius_bounds(U)
    with mpmath.workprec(U.field.precision_bits):
        return int(mpmath.floor(bounds.upper_minima * U.field.degree / mpmath.log(2))) + 1


# ---------------------------------------------------------------------------
# real quadratic fields


def is_squarefree(n: int) -> bool:
    return n > 0 and all(e == 1 for e in _exponents(n))


def _exponents(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append(e)
        p += 1
    if n > 1:
        out.append(1)
    return out


def quadratic_field(D: int, precision_bits: int = DEFAULT_PRECISION) -> NumberField:
    """Q(sqrt D) with an integral power basis: t = sqrt D, or (1 + sqrt D)/2 when D = 1 mod 4."""
    if not is_squarefree(D) or D < 2:
        raise ValueError(f"{D} is not a squarefree integer >= 2")
    if D % 4 == 1:
        return make_field([-(D - 1) // 4, -1, 1], precision_bits)
    return make_field([-D, 0, 1], precision_bits)


def _quadratic_cf(P: int, Q: int, D: int):
    """Partial quotients of (P + sqrt D)/Q; needs Q | D - P^2."""
    s = math.isqrt(D)
    while True:
        a = (P + s) // Q
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


def pell_solution(D: int) -> tuple[int, int]:
    """Least x, y > 0 with x^2 - D y^2 = +-1, from the continued fraction of sqrt D."""
    if not is_squarefree(D) or D < 2:
        raise ValueError(f"{D} is not a squarefree integer >= 2")
    p0, p1, q0, q1 = 0, 1, 1, 0
    for a in _quadratic_cf(0, 1, D):
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        if abs(p1 * p1 - D * q1 * q1) == 1:
            return p1, q1


def pell_fundamental_unit(D: int, K: NumberField | None = None) -> FieldElement:
    """Fundamental unit > 1 of the maximal order of Q(sqrt D), in ``quadratic_field(D)``.

    Convergents p/q of the larger root t of the defining polynomial are scanned
    for the first with N(p - q t) = +-1; the unit is then the conjugate of p - q t.
    """
    K = K or quadratic_field(D)
    b, c = K.poly[1], K.poly[0]  # t^2 + b t + c
    if D % 4 == 1:
        cf = _quadratic_cf(1, 2, D)
    else:
        cf = _quadratic_cf(0, 1, D)
    p0, p1, q0, q1 = 0, 1, 1, 0
    for a in cf:
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        # N(p - q t) = p^2 + b p q + c q^2
        if abs(p1 * p1 + b * p1 * q1 + c * q1 * q1) == 1:
            # conjugate of p - q t is p - q (-b - t) = (p + b q) + q t
            return K.element([p1 + b * q1, q1])
