"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``python3 tests/test_acceptance.py`` or through pytest.
"""
import itertools
import math
import random
import sys
import time
from fractions import Fraction

import mpmath
import pytest

from largeness.field import embeddings, exact_norm, make_field
from largeness.floor import boundedness_certificate, browkin_type, floor, make_special_type, padic_digits, rational_field
from largeness.heights import SCHINZEL_BOUND, Verdict, log_norm, schinzel_fires_for_norm, weil_height_integer
from largeness.search import (
    Status,
    brute_force_solutions,
    build_problem,
    classify_ideal,
    enumeration_size_bound,
    quick_reject,
    solve,
)
from largeness.floor import ruban_type
from largeness.serialize import fixture_path, load_element, load_field, load_units
from largeness.survey import DESK_PRIMES, EXPECTED_LARGE, survey_fixtures, survey_prime
from largeness.units import covering_radius_bounds, regulator, sufficient_largeness, uniform_extension_degree

from conftest import CYCLOTOMIC_UNIT_FIXTURES, cyclotomic, quadratic_units


def criterion(number, title):
    def wrap(fn):
        def test(capsys):
            t0 = time.perf_counter()
            try:
                detail = fn()
            except BaseException:
                with capsys.disabled():
                    print(f"\nCRITERION {number} FAIL  {title}  ({time.perf_counter() - t0:.2f} s)")
                raise
            with capsys.disabled():
                extra = f"  [{detail}]" if detail else ""
                print(f"\nCRITERION {number} PASS  {title}  ({time.perf_counter() - t0:.2f} s){extra}")
        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test
    return wrap


def close(a, b, tol=1e-4):
    return all(abs(float(x) - y) <= tol for x, y in zip(a, b)) and len(a) == len(b)


# ---------------------------------------------------------------------------
# 1. worked example for p = 17

P17 = [0, 0, 1, -1, 0, 0, 0, -1]
GOLDEN = {
    "L": [[-1.76274, -1.76274, 1.76274, 1.76274],
          [-0.33031, 2.09306, -2.89946, 1.13671],
          [1.13671, -2.89946, -0.33031, 2.09306]],
    "M": [[-0.46575, -0.29144, 0.07276],
          [-0.17430, -0.07276, -0.29144],
          [-0.07276, -0.36421, -0.21868],
          [0, 0, 0]],
    "N_plus": [[0, 0.07276, 0.36421],
               [0.29144, 0.29144, 0],
               [0.39298, 0, 0.07276],
               [0.46575, 0.36421, 0.29144]],
    "N_minus": [[-0.46575, -0.29144, 0],
                [-0.17430, -0.07276, -0.36421],
                [-0.07276, -0.36421, -0.29144],
                [0, 0, -0.07276]],
    "X": [1.40668, 0.65107, 1.72510, -0.94965],
    "lower": [-0.42539, 0.05376, -0.36109],
    "upper": [0.89419, 1.08567, 0.67081],
    "ULX": [1.07636, 2.74414, -1.17435, 0.18706],
}


def _matrix_close(A, B):
    return len(A) == len(B) and all(close(a, b) for a, b in zip(A, B))


@criterion(1, "p = 17 worked example reproduced")
def test_criterion_1_worked_example():
    t0 = time.perf_counter()
    K = load_field(fixture_path("zeta16.field.json"))
    # the printed columns correspond to this ordering of the canonical embeddings
    order = next(p for p in itertools.permutations(range(4))
                 if _matrix_close([[row[j] for j in p] for row in cyclotomic(16)[1].L], GOLDEN["L"]))
    Kp = K.with_embedding_order(order)
    U = load_units(Kp, fixture_path("zeta16.units.json"))
    x = Kp.element(P17)
    problem = build_problem(x, 1, U)
    report = classify_ideal(x, U, 1)
    elapsed = time.perf_counter() - t0

    assert _matrix_close(U.L, GOLDEN["L"])
    assert _matrix_close(problem.M, GOLDEN["M"])
    assert _matrix_close(problem.N_plus, GOLDEN["N_plus"])
    assert _matrix_close(problem.N_minus, GOLDEN["N_minus"])
    assert close(problem.X, GOLDEN["X"])
    assert close(problem.lower, GOLDEN["lower"])
    assert close(problem.upper, GOLDEN["upper"])
    assert (problem.box_lo, problem.box_hi) == ((0, 1, 0), (0, 1, 0))
    assert report.status is Status.NOT_LARGE and report.candidates_tested == 1
    (exps, vals), = report.rejected
    assert exps == (0, 1, 0) and close(vals, GOLDEN["ULX"])

    # canonical order: same verdict, UL+X a column permutation of the printed one
    K0, U0 = cyclotomic(16)
    r0 = classify_ideal(K0.element(P17), U0)
    assert r0.status is Status.NOT_LARGE
    (e0, v0), = r0.rejected
    assert e0 == (0, 1, 0)
    assert any(close([v0[j] for j in p], GOLDEN["ULX"]) for p in itertools.permutations(range(4)))
    assert elapsed < 1.0
    return f"{elapsed * 1000:.0f} ms, column order {order}"


# ---------------------------------------------------------------------------
# 2. survey of the desk-scale primes

@criterion(2, "survey: large exactly for p in {5, 7, 11, 13, 19, 31}")
def test_criterion_2_survey():
    t0 = time.perf_counter()
    rows = [survey_prime(p) for p in DESK_PRIMES]
    elapsed = time.perf_counter() - t0
    large = {row.p for row in rows if row.large}
    assert large == set(EXPECTED_LARGE)
    for row in rows:
        if row.large:
            assert row.report.solutions and all(row.matches), row.p
        else:
            assert row.report.status is Status.NOT_LARGE
    assert elapsed < 30
    return f"{elapsed:.2f} s"


# ---------------------------------------------------------------------------
# 3. height pre-check over the fifteen primes

FIFTEEN = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 61, 67, 71)


def phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@criterion(3, "Schinzel criterion fires exactly for p in {41, 67, 71}")
def test_criterion_3_schinzel():
    fires = set()
    for p in FIFTEEN:
        d = phi(p - 1)
        exact = schinzel_fires_for_norm(p, d)
        with mpmath.workprec(128):
            gap = mpmath.log(p) / d - SCHINZEL_BOUND
        assert abs(gap) > 1e-12 and exact == (gap < 0)
        if exact:
            fires.add(p)
        # p < 5^(phi/12)  <=>  p^12 < 5^phi, exactly
        assert not p ** 12 < 5 ** d
    assert fires == {41, 67, 71}
    fx = survey_fixtures()
    for p in (41, 67, 71):
        K = load_field(fixture_path(fx[str(p)]["field"]))
        report = classify_ideal(load_element(K, fx[str(p)]["generator"]), None)
        assert report.status is Status.NOT_LARGE and report.stage == "height"
    return "fires for " + ", ".join(map(str, sorted(fires)))


# ---------------------------------------------------------------------------
# 4. box search against the brute-force oracle

QUADRATIC_D = (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30, 31, 33)


@criterion(4, "solve() equals brute force on [-5, 5] for 20 real quadratic fields")
def test_criterion_4_oracle():
    rng = random.Random(4)
    compared = mismatches = nonempty = 0
    for D in QUADRATIC_D:
        K, U = quadratic_units(D)
        xs = []
        while len(xs) < 10:
            x = K.element([rng.randint(-12, 12), rng.randint(-6, 6)])
            if not x.is_zero() and abs(exact_norm(x)) <= 10 ** 6:
                xs.append(x)
        for x in xs:
            for B in (Fraction(1), Fraction(3, 2)):
                brute = brute_force_solutions(x, B, U, 5)
                if quick_reject(x, B):
                    got = []
                else:
                    got = [e for e in solve(build_problem(x, B, U)).exponent_vectors if abs(e[0]) <= 5]
                compared += 1
                nonempty += bool(brute)
                mismatches += got != brute
    assert compared == 400 and mismatches == 0
    assert 0 < nonempty < compared
    return f"{compared} instances, {nonempty} with solutions, 0 mismatches"


# ---------------------------------------------------------------------------
# 5. invariant suite over every fixture

SURVEY_FOR_FIELD = {4: 5, 6: 7, 10: 11, 12: 13, 16: 17, 18: 19, 30: 31}


def _fixture_groups():
    out = [(f"zeta{m}", *cyclotomic(m)) for m in CYCLOTOMIC_UNIT_FIXTURES]
    out += [(f"sqrt{D}", *quadratic_units(D)) for D in (2, 5, 19)]
    return out


@criterion(5, "invariants on every fixture")
def test_criterion_5_invariants():
    rng = random.Random(5)
    fx = survey_fixtures()
    groups = _fixture_groups()
    solves = 0
    worst_identity = mpmath.mpf(0)
    for name, K, U in groups:
        r = U.rank
        for row in U.L:
            assert abs(sum(row)) <= mpmath.mpf("1e-40")
        if r:
            R = regulator(U)
            for drop in range(K.s):
                sub = mpmath.matrix([[row[j] for j in range(K.s) if j != drop] for row in U.L])
                assert abs(abs(mpmath.det(sub)) - R) <= 1e-10 * R

        xs = [K.element([rng.randint(-6, 6) for _ in range(K.degree)]) for _ in range(8)]
        if name.startswith("zeta"):
            p = SURVEY_FOR_FIELD[int(name[4:])]
            xs.append(load_element(K, fx[str(p)]["generator"]))
        for x in xs:
            if x.is_zero():
                continue
            n = abs(exact_norm(x))
            prod = mpmath.mpf(1)
            for w, v in zip(K.weights, embeddings(x)):
                prod *= abs(v) ** w
            assert abs(prod - n) <= mpmath.mpf("1e-20") * n
            if quick_reject(x, 1):
                continue
            problem = build_problem(x, 1, U)
            if r:
                tol = mpmath.mpf(2) ** -86 * max(1, max(abs(v) for row in U.L for v in row))
                for N in (problem.M, problem.N_plus, problem.N_minus):
                    err = max(abs(sum(U.L[i][k] * N[k][j] for k in range(K.s)) - (i == j))
                              for i in range(r) for j in range(r))
                    worst_identity = max(worst_identity, err)
                    assert err <= tol
                assert all(v >= 0 for row in problem.N_plus for v in row)
                assert all(v <= 0 for row in problem.N_minus for v in row)
            if problem.box_size > 10 ** 5:
                continue
            report = solve(problem)
            solves += 1
            assert report.candidates_tested <= math.ceil(enumeration_size_bound(problem))

    # h >= n on 500 random integral elements across the fixture fields
    tol_hn = mpmath.mpf(2) ** (-192 // 2 + 10)
    for _ in range(500):
        _, K, _ = rng.choice(groups)
        x = K.element([rng.randint(-9, 9) for _ in range(K.degree)])
        if x.is_zero():
            x = K.one
        assert weil_height_integer(x) >= log_norm(x) - tol_hn
    return f"{len(groups)} fixtures, {solves} solves, max |LN - I| = {mpmath.nstr(worst_identity, 3)}"


# ---------------------------------------------------------------------------
# 6. logarithmic norm of 1 - zeta_p

@criterion(6, "n(1 - zeta_p) = log(p)/(p - 1)")
def test_criterion_6_cyclotomic_log_norm():
    for p in (5, 7, 11, 13):
        K = make_field([1] * p)
        x = K.one - K.gen
        assert abs(log_norm(x) - mpmath.log(p) / (p - 1)) < 1e-12
    return "p = 5, 7, 11, 13"


# ---------------------------------------------------------------------------
# 7. floor types

def v5(q):
    q = Fraction(q)
    if q == 0:
        return None
    k, n, d = 0, q.numerator, q.denominator
    while n % 5 == 0:
        n //= 5
        k += 1
    while d % 5 == 0:
        d //= 5
        k -= 1
    return k


def gaussian_type():
    K = make_field([1, 0, 1], cm=True)
    return make_special_type(K, K.element([1, 2]), [K.zero, K.one, -K.one, K.gen, -K.gen], 2)


@criterion(7, "floor types: reconstruction, axioms, boundedness")
def test_criterion_7_floor_types():
    rng = random.Random(7)
    Qf = rational_field()
    types = {"browkin": browkin_type(5), "ruban": ruban_type(5)}
    for _ in range(50):
        k = rng.randint(0, 4)
        q = Fraction(rng.randint(-10 ** 6, 10 ** 6), 5 ** k)
        alpha = Qf.element([q])
        for T in types.values():
            e = padic_digits(alpha, T, 5)
            for j in e.indices:
                rest = q - e.partial_sum(T, j).coords[0]
                assert rest == 0 or v5(rest) > j
            s = floor(alpha, T)
            sq = s.coords[0]
            assert q == sq or v5(q - sq) >= 1                              # (a)
            assert v5(sq) is None or (sq * 5 ** k).denominator == 1        # (b)
            beta = rng.randint(-10 ** 4, 10 ** 4)
            assert floor(Qf.element([q + 5 * beta]), T) == s               # (d)
    for T in types.values():
        assert floor(Qf.zero, T).is_zero()                                 # (c)

    G = gaussian_type()
    certs = {"browkin": [mpmath.mpf("2.5")], "ruban": [mpmath.mpf(5)]}
    assert [boundedness_certificate(types[n]) for n in certs] == list(certs.values())
    (cg,) = boundedness_certificate(G)
    assert abs(cg - mpmath.sqrt(5) / (mpmath.sqrt(5) - 1)) < 1e-40
    for T, C in ((types["browkin"], certs["browkin"]), (types["ruban"], certs["ruban"]), (G, [cg])):
        K = T.field
        for _ in range(500):
            beta = K.element([rng.randint(-10 ** 6, 10 ** 6) for _ in range(K.degree)])
            s = floor(beta / T.pi ** rng.randint(0, 6), T)
            assert all(abs(z) <= c for z, c in zip(embeddings(s), C))
    return "C = 2.5, 5, " + mpmath.nstr(cg, 6)


# ---------------------------------------------------------------------------
# 8. covering-radius bracket

@criterion(8, "covering-radius bracket and sufficient largeness")
def test_criterion_8_covering_radius():
    K, U = quadratic_units(2)
    b = covering_radius_bounds(U)
    assert abs(b.lower_regulator - 0.44069) <= 1e-4
    assert abs(b.upper_minima - 0.88137) <= 1e-4
    assert uniform_extension_degree(U, b) == 3
    assert sufficient_largeness(K.element([3, 1]), U, b) is Verdict.STRICTLY_LARGE
    K16, U16 = cyclotomic(16)
    assert sufficient_largeness(K16.element(P17), U16) is Verdict.INCONCLUSIVE
    return f"Q(sqrt2): [{mpmath.nstr(b.lower_regulator, 6)}, {mpmath.nstr(b.upper_minima, 6)}], j = 3"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
