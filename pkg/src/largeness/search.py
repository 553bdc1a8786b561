"""Search for large generators of a principal ideal x*O_K.

Given x and a bound B, all exponent vectors U with |sigma(x * prod u_i^U_i)| >= B
for every embedding are enumerated inside a box obtained from the log-unit
matrix L, and every hit is re-certified from the exact witness element.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .field import (
    PRECISION_CAP,
    FieldElement,
    UndecidedPrecision,
    cert_tol,
    certified_min,
    exact_norm,
    log_abs_embeddings,
    log_embedding,
)
from .heights import Verdict, is_root_of_unity, is_unit, schinzel_nonlarge
from .units import (
    MAX_MINIMA_RANK,
    EnumerationBudgetExceeded,
    UnitGroup,
    covering_radius_bounds,
    sufficient_largeness,
)

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 16
_MAX_REJECTED = 32


class Status(str, enum.Enum):
    STRICTLY_LARGE = "strictly_large"
    LARGE_BOUNDARY = "large_boundary"
    NOT_LARGE = "not_large"
    NORM_TOO_SMALL = "norm_too_small"
    UNDECIDED_PRECISION = "undecided_precision"


def as_bound(B) -> Fraction:
    """B as an exact positive rational (floats are converted exactly)."""
    if isinstance(B, str):
        B = Fraction(B.strip())
    B = Fraction(B)
    if B <= 0:
        raise ValueError("B must be positive")
    return B


def _log_bound(B: Fraction) -> mpf:
    return mpmath.log(B.numerator) - mpmath.log(B.denominator)


def quick_reject(x: FieldElement, B=1) -> bool:
    """True when |N(x)| < B^d, in which case no unit multiple of x can reach B everywhere."""
    if x.is_zero():
        raise ValueError("x must be nonzero")
    return abs(exact_norm(x)) < as_bound(B) ** x.degree


def subset_norm_bounds(x: FieldElement, B, subset_size: int) -> tuple[Fraction, Fraction]:
    """Range (B^#S, B^(#S-d) |N(x)|) for the product of |sigma(xu)| over a set S of embeddings."""
    d = x.degree
    if not 1 <= subset_size <= d:
        raise ValueError("subset size must lie in 1..d")
    B = as_bound(B)
    return B ** subset_size, B ** (subset_size - d) * abs(exact_norm(x))


@dataclass(frozen=True, eq=False)
class SearchProblem:
    x: FieldElement
    B: Fraction
    units: UnitGroup
    X: tuple[mpf, ...]
    M: tuple[tuple[mpf, ...], ...]
    N_plus: tuple[tuple[mpf, ...], ...]
    N_minus: tuple[tuple[mpf, ...], ...]
    lower: tuple[mpf, ...]  # -X N^+
    upper: tuple[mpf, ...]  # -X N^-
    box_lo: tuple[int, ...]
    box_hi: tuple[int, ...]
    precision: int

    @property
    def field(self):
        return self.units.field

    @property
    def box_size(self) -> int:
        return math.prod(max(h - l + 1, 0) for l, h in zip(self.box_lo, self.box_hi))


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _vecmat(v, A):
    return [sum(v[k] * A[k][j] for k in range(len(v))) for j in range(len(A[0]))]


def build_problem(x: FieldElement, B, U: UnitGroup) -> SearchProblem:
    """Set up the box search: M, N^+, N^-, X = l(x) - L(B) and the exponent box.

    Rank-0 unit groups give empty matrices and the single empty exponent vector.
    """
    K = U.field
    if not x.field.same_field(K):
        raise ValueError("x and the units live in different fields")
    if x.is_zero():
        raise ValueError("x must be nonzero")
    B = as_bound(B)
    if quick_reject(x, B):
        raise ValueError("|N(x)| < B^d: nothing to search")
    prec = K.precision_bits
    r, s = U.rank, K.s
    with mpmath.workprec(prec):
        logB = _log_bound(B)
        X = tuple(v - w * logB for v, w in zip(log_embedding(x, prec), K.weights))
        if r == 0:
            return SearchProblem(x, B, U, X, (), (), (), (), (), (), (), prec)
        L = [list(row) for row in U.L]
        trunc = mpmath.matrix([row[:-1] for row in L])
        if abs(mpmath.det(trunc)) <= mpf("1e-20"):
            raise ValueError("truncated L is singular; unit input is bad")
        inv = trunc ** -1
        M = [[inv[i, j] for j in range(r)] for i in range(r)] + [[mpf(0)] * r]
        cols = list(zip(*M))
        Np = [[M[i][j] - min(cols[j]) for j in range(r)] for i in range(s)]
        Nm = [[M[i][j] - max(cols[j]) for j in range(r)] for i in range(s)]

        tol = mpf(2) ** (-86) * max(1, max(abs(v) for row in L for v in row))
        eye = lambda A: all(abs(A[i][j] - (i == j)) <= tol for i in range(r) for j in range(r))
        if not (eye(_matmul(L, M)) and eye(_matmul(L, Np)) and eye(_matmul(L, Nm))):
            raise ArithmeticError("L M = L N+- = I failed; precision too low for these units")

        lower = tuple(-v for v in _vecmat(X, Np))
        upper = tuple(-v for v in _vecmat(X, Nm))
        slack = 10 * cert_tol(prec)
        box_lo = tuple(int(mpmath.ceil(v - slack)) for v in lower)
        box_hi = tuple(int(mpmath.floor(v + slack)) for v in upper)
    freeze = lambda A: tuple(tuple(row) for row in A)
    return SearchProblem(x, B, U, X, freeze(M), freeze(Np), freeze(Nm), lower, upper,
                         box_lo, box_hi, prec)


def enumeration_size_bound(problem: SearchProblem) -> mpf:
    """(log N(x) - d log B + 1)^r * prod_j (max M_j - min M_j + 1)."""
    with mpmath.workprec(problem.precision):
        XV = sum(problem.X)
        if XV < -cert_tol(problem.precision):
            raise ValueError("log N(x) - d log B is negative")
        out = (max(XV, mpf(0)) + 1) ** problem.units.rank
        for col in zip(*problem.M):
            out *= max(col) - min(col) + 1
        return out


@dataclass(frozen=True)
class Solution:
    exponents: tuple[int, ...]
    torsion_exponent: int
    witness: FieldElement
    margin: mpf  # min over embeddings of log|sigma(w)| - log B
    strict: bool


@dataclass
class LargenessReport:
    status: Status
    solutions: list[Solution] = field(default_factory=list)
    candidates_tested: int = 0
    bound_estimate: mpf | None = None
    stage: str = ""
    precision: int = 0
    box: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    rejected: list[tuple[tuple[int, ...], tuple[mpf, ...]]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def exponent_vectors(self) -> list[tuple[int, ...]]:
        return [sol.exponents for sol in self.solutions]


def _margins(w: FieldElement, logB: mpf):
    return lambda p: [v - logB for v in log_abs_embeddings(w, p)]


def _certify(x: FieldElement, B: Fraction, U: UnitGroup, exps: Sequence[int], prec: int, cap: int):
    """Certify a candidate from its exact witness.  Returns a Solution or None, or raises
    UndecidedPrecision."""
    w = x * U.power_product(exps)
    with mpmath.workprec(cap):
        logB = _log_bound(B)
    if B == 1 and is_unit(w):
        # units are large only as roots of unity, where every margin is exactly 0
        if is_root_of_unity(w):
            return Solution(tuple(exps), 0, w, mpf(0), False)
        return None
    sign, margin = certified_min(_margins(w, logB), 2 * prec, max(cap, 2 * prec))
    if sign < 0:
        return None
    with mpmath.workprec(prec):
        margin = +margin  # reported at working precision so reports serialize exactly
    return Solution(tuple(exps), 0, w, margin, sign > 0)


def _prefilter(problem: SearchProblem):
    """Yield (U, UL+X) candidates whose float64 value clears a conservative threshold."""
    L = np.array([[float(v) for v in row] for row in problem.units.L])
    X = np.array([float(v) for v in problem.X])
    lo = np.array(problem.box_lo, dtype=np.int64)
    shape = tuple(int(h - l + 1) for l, h in zip(problem.box_lo, problem.box_hi))
    total = problem.box_size
    scale = float(np.abs(L).max()) if L.size else 0.0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        Us = np.stack(np.unravel_index(idx, shape), axis=1) + lo
        vals = Us @ L + X
        slack = 1e-9 * (1.0 + np.abs(Us).sum(axis=1) * scale + np.abs(X).max())
        keep = (vals >= -slack[:, None]).all(axis=1)
        for i in np.flatnonzero(keep):
            yield tuple(int(v) for v in Us[i])


def solve(problem: SearchProblem, budget: int = DEFAULT_BUDGET, cap: int = PRECISION_CAP) -> LargenessReport:
    """Test every exponent vector in the box and certify the accepted ones."""
    x, B, U = problem.x, problem.B, problem.units
    prec = problem.precision
    total = problem.box_size
    if total > budget:
        raise EnumerationBudgetExceeded(f"box holds {total} candidates, budget is {budget}")
    report = LargenessReport(Status.NOT_LARGE, candidates_tested=total,
                             bound_estimate=enumeration_size_bound(problem), stage="exhaustive",
                             precision=prec, box=(problem.box_lo, problem.box_hi))
    tol = cert_tol(prec)
    undecided = False

    if total <= _MAX_REJECTED:
        # small boxes skip the float filter so the report can show every rejection
        candidates = itertools.product(*(range(l, h + 1) for l, h in zip(problem.box_lo, problem.box_hi)))
    else:
        candidates = _prefilter(problem)

    for exps in candidates:
        with mpmath.workprec(prec):
            vals = tuple(problem.X[j] + sum(e * U.L[i][j] for i, e in enumerate(exps))
                         for j in range(U.field.s))
            accepted = min(vals) >= -tol
        if not accepted:
            if len(report.rejected) < _MAX_REJECTED:
                report.rejected.append((exps, vals))
            continue
        try:
            sol = _certify(x, B, U, exps, prec, cap)
        except UndecidedPrecision:
            undecided = True
            report.notes.append(f"sign unresolved for U = {exps}")
            continue
        if sol is None:
            if len(report.rejected) < _MAX_REJECTED:
                report.rejected.append((exps, vals))
            continue
        report.solutions.append(sol)

    report.solutions.sort(key=lambda s: s.exponents)
    if any(s.strict for s in report.solutions):
        report.status = Status.STRICTLY_LARGE
    elif report.solutions:
        report.status = Status.LARGE_BOUNDARY
    elif undecided:
        report.status = Status.UNDECIDED_PRECISION
    if report.solutions:
        report.notes.append("witnesses are listed modulo torsion; every torsion multiple is equally valid")
    return report


def brute_force_solutions(x: FieldElement, B, U: UnitGroup, box_halfwidth: int) -> list[tuple[int, ...]]:
    """Every U in [-w, w]^r whose exact multiple x * prod u_i^U_i has all log|sigma| >= log B - tol.

    Independent of the box construction: it evaluates embeddings of the exact
    products directly.
    """
    if U.rank > 3 or box_halfwidth > 10:
        raise ValueError("oracle limited to r <= 3 and half-width <= 10")
    B = as_bound(B)
    prec = U.field.precision_bits
    tol = cert_tol(prec)
    with mpmath.workprec(prec):
        logB = _log_bound(B)
    rng = range(-box_halfwidth, box_halfwidth + 1)
    out = []
    for exps in itertools.product(rng, repeat=U.rank):
        w = x * U.power_product(exps)
        with mpmath.workprec(prec):
            if min(log_abs_embeddings(w, prec)) - logB >= -tol:
                out.append(tuple(exps))
    return out


def classify_ideal(x: FieldElement, U: UnitGroup | None, B=1, budget: int = DEFAULT_BUDGET,
                   cap: int = PRECISION_CAP, use_schinzel: bool = True) -> LargenessReport:
    """Decide whether x*O_K has a generator with every |sigma| >= B.

    Stages: norm test, Schinzel height test (B = 1, CM or totally real K),
    covering-radius test, exhaustive box search.  The exhaustive search decides
    whenever it fits the budget.
    """
    if x.is_zero():
        raise ValueError("x must be nonzero")
    B = as_bound(B)
    K = x.field
    prec = K.precision_bits
    if quick_reject(x, B):
        return LargenessReport(Status.NORM_TOO_SMALL, stage="norm", precision=prec)
    if B == 1 and use_schinzel and K.is_cm_or_totally_real and x.is_integral() and not is_unit(x):
        if schinzel_nonlarge(x) is Verdict.NOT_LARGE:
            return LargenessReport(Status.NOT_LARGE, stage="height", precision=prec,
                                   notes=["n(x) below the Schinzel bound"])
    if U is None:
        raise ValueError("unit group needed beyond the norm and height tests")

    fast = None
    if B == 1 and 1 <= U.rank <= MAX_MINIMA_RANK and not is_unit(x):
        try:
            fast = sufficient_largeness(x, U, covering_radius_bounds(U))
        except EnumerationBudgetExceeded:
            fast = None

    problem = build_problem(x, B, U)
    try:
        report = solve(problem, budget, cap)
    except EnumerationBudgetExceeded:
        if fast is Verdict.STRICTLY_LARGE:
            return LargenessReport(Status.STRICTLY_LARGE, stage="covering_radius", precision=prec,
                                   candidates_tested=0, bound_estimate=enumeration_size_bound(problem),
                                   notes=["n(x) exceeds the covering-radius upper bound; box too big to list witnesses"])
        raise
    if fast is Verdict.STRICTLY_LARGE:
        report.notes.append("covering-radius test also certified strict largeness")
        if report.status is not Status.STRICTLY_LARGE:
            raise AssertionError("covering-radius test and exhaustive search disagree")
    return report
