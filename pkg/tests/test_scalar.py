from fractions import Fraction

import pytest
from hypothesis import given

from conftest import quads, rationals
from nnrank.errors import MalformedScalar, WrongDomain
from nnrank.scalar import (
    Domain, QuadScalar, SQRT2, coerce, quad_sign, scalar_format, scalar_parse, sign, to_float,
)

ALPHA = QuadScalar(1, Fraction(1, 2))


@pytest.mark.parametrize("p, q, expected", [
    (0, 0, 0),
    (2, -1, 1),    # 2 - sqrt2 > 0 since 4 > 2
    (1, -1, -1),   # 1 - sqrt2 < 0 since 1 < 2
    (-2, 1, -1),
    (-1, 1, 1),
    (0, Fraction(-1, 3), -1),
    (Fraction(7, 5), Fraction(-1, 1), -1),  # 49/25 < 2
    (Fraction(3, 2), Fraction(-1, 1), 1),   # 9/4 > 2
])
def test_quad_sign_examples(p, q, expected):
    assert quad_sign(QuadScalar(p, q)) == expected


def test_parse_examples():
    assert scalar_parse("3/4", Domain.RAT) == Fraction(3, 4)
    assert scalar_parse("1+1/2r2", Domain.QUAD) == ALPHA
    x = scalar_parse("2", Domain.QUAD)
    assert isinstance(x, QuadScalar) and (x.p, x.q) == (2, 0)
    assert scalar_parse("-7", Domain.RAT) == -7


def test_format_examples():
    assert scalar_format(Fraction(3, 4)) == "3/4"
    assert scalar_format(QuadScalar(2, -1)) == "2-1r2"
    assert scalar_format(QuadScalar(0, 1)) == "0+1r2"
    assert scalar_format(QuadScalar(5, 0)) == "5"


@pytest.mark.parametrize("text", ["", "1.5", "1 /2", "1/0", "1/-2", "r2", "1+r2", "1+-1r2", "+1", "1/2/3", "1+2"])
def test_parse_rejects(text):
    with pytest.raises(MalformedScalar):
        scalar_parse(text, Domain.QUAD)


def test_sqrt2_under_rat_is_wrong_domain():
    with pytest.raises(WrongDomain):
        scalar_parse("1+1/2r2", Domain.RAT)
    with pytest.raises(WrongDomain):
        coerce(SQRT2, Domain.RAT)
    assert coerce(QuadScalar(3, 0), Domain.RAT) == 3


def test_alpha_identities():
    inv = 1 / ALPHA
    assert inv == QuadScalar(2, -1)
    assert 2 - inv == SQRT2
    assert 2 * ALPHA * ALPHA - 4 * ALPHA + 1 == 0
    assert SQRT2 * SQRT2 == 2


@given(quads(), quads(), quads())
def test_distributive(x, y, z):
    assert (x + y) * z == x * z + y * z


@given(quads())
def test_inverse(x):
    if x:
        assert x * x.inverse() == 1
        assert x / x == 1


@given(rationals(), rationals(), rationals())
def test_distributive_rat(x, y, z):
    assert (x + y) * z == x * z + y * z


@given(quads())
def test_sign_properties(x):
    assert quad_sign(x) == -quad_sign(-x)
    if x:
        assert quad_sign(x * x) == 1


@given(quads())
def test_sign_matches_high_precision_float(x):
    # independent check: compare with a 60-digit decimal evaluation
    from decimal import Decimal, getcontext
    getcontext().prec = 60
    val = Decimal(x.p.numerator) / Decimal(x.p.denominator) + \
        Decimal(x.q.numerator) / Decimal(x.q.denominator) * Decimal(2).sqrt()
    expected = 0 if x == 0 else (1 if val > 0 else -1)
    assert quad_sign(x) == expected


@given(quads(1000, 1000))
def test_roundtrip_quad(x):
    assert scalar_parse(scalar_format(x), Domain.QUAD) == x


@given(rationals(10**6, 10**6))
def test_roundtrip_rat(x):
    assert scalar_parse(scalar_format(x), Domain.RAT) == x


def test_roundtrip_bulk():
    import random
    rng = random.Random(1)
    for _ in range(100_000):
        x = QuadScalar(Fraction(rng.randint(-999, 999), rng.randint(1, 99)),
                       Fraction(rng.randint(-999, 999), rng.randint(1, 99)))
        assert scalar_parse(scalar_format(x), Domain.QUAD) == x


def test_comparisons_and_float():
    assert ALPHA > 1 and ALPHA < 2
    assert QuadScalar(2, -1) < 1
    assert abs(to_float(ALPHA) - 1.7071067811865475) < 1e-15
    assert sign(Fraction(-1, 3)) == -1
    assert hash(QuadScalar(3, 0)) == hash(Fraction(3))


def test_immutable():
    with pytest.raises(AttributeError):
        ALPHA.p = 3
