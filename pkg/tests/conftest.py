import random

import mpmath
import pytest

from largeness.field import DEFAULT_PRECISION, make_field
from largeness.serialize import fixture_path, load_field, load_units
from largeness.units import build_unit_group, pell_fundamental_unit, quadratic_field

# test-side comparisons run at the library's default working precision
mpmath.mp.prec = DEFAULT_PRECISION

CYCLOTOMIC_UNIT_FIXTURES = (4, 6, 10, 12, 16, 18, 30)

# a spread of signatures: quadratic, cubic with one or three real roots, cyclotomic
TEST_POLYS = {
    "sqrt2": [-2, 0, 1],
    "golden": [-1, -1, 1],
    "cubic_mixed": [-2, 0, 0, 1],
    "cubic_real": [1, -3, 0, 1],
    "zeta5": [1, 1, 1, 1, 1],
    "zeta16": [1, 0, 0, 0, 0, 0, 0, 0, 1],
}


def cyclotomic(m, precision_bits=None):
    K = load_field(fixture_path(f"zeta{m}.field.json"), precision_bits)
    return K, load_units(K, fixture_path(f"zeta{m}.units.json"))


def quadratic_units(D):
    K = quadratic_field(D)
    return K, build_unit_group(K, -K.one, 2, [pell_fundamental_unit(D, K)])


def random_element(K, rng, bound=4, integral=True):
    coords = [rng.randint(-bound, bound) for _ in range(K.degree)]
    if not integral:
        den = rng.randint(1, 6)
        coords = [f"{c}/{den}" for c in coords]
    x = K.element(coords)
    return x if not x.is_zero() else K.one


@pytest.fixture(scope="session")
def zeta16():
    return cyclotomic(16)


@pytest.fixture(scope="session")
def zeta16_printed_order():
    """Q(zeta16) with embeddings in the column order used by the printed worked example."""
    K, _ = cyclotomic(16)
    K = K.with_embedding_order([0, 3, 1, 2])
    return K, load_units(K, fixture_path("zeta16.units.json"))


@pytest.fixture(scope="session")
def test_fields():
    return {name: make_field(poly) for name, poly in TEST_POLYS.items()}


@pytest.fixture
def rng():
    return random.Random(20240611)
