import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from periodlab.base import LocalFieldSpec
from periodlab.errors import NotInvertibleError, ValidationError
from periodlab.gf import FFElement
from periodlab.tilt import (
    Exponent,
    LogNorm,
    TiltElement,
    theta,
    tilt_abs,
    tilt_arith,
    tilt_frobenius,
    tilt_inv,
)

Q2 = LocalFieldSpec.unramified(2, 1, 8)
Q2F2 = LocalFieldSpec.unramified(2, 2, 8)
Q3 = LocalFieldSpec.unramified(3, 1, 6)


def E(p, v):
    return Exponent.of(p, v)


def test_exponent_normalization_and_order():
    a = Exponent(2, 2, 1)  # 2/2 -> 1
    assert (a.num, a.s) == (1, 0)
    b = Exponent.of(2, Fraction(3, 4))
    assert (b.num, b.s) == (3, 2)
    assert E(2, "1/2") < E(2, 1) < E(2, "5/4")
    with pytest.raises(ValidationError):
        Exponent.of(2, Fraction(1, 3))
    assert (b + b).value() == Fraction(3, 2)
    assert b.scale_p_power(-1).value() == Fraction(3, 8)
    assert b.scale_p_power(2).value() == 3


@settings(max_examples=50, derandomize=True)
@given(st.fractions(max_denominator=8), st.fractions(max_denominator=8))
def test_exponent_order_matches_fractions(x, y):
    def ok(v):
        d = v.denominator
        while d % 2 == 0:
            d //= 2
        return d == 1
    if not (ok(x) and ok(y)):
        return
    a, b = Exponent.of(2, x), Exponent.of(2, y)
    assert (a < b) == (x < y)
    assert (a + b).value() == x + y


def test_char_p_addition():
    w = TiltElement.variable(Q2)
    assert (w + w).is_zero()
    w3 = TiltElement.variable(Q3)
    s = w3 + w3
    assert s.coefficient(E(3, 1)) == FFElement.from_int(3, 2)


def test_exponent_addition_on_multiplication():
    half = TiltElement.monomial(Q2, Fraction(1, 2))
    assert (half * half) == TiltElement.variable(Q2)


def test_one_plus_w_squared_char2():
    x = TiltElement.one(Q2) + TiltElement.variable(Q2)
    sq = x * x
    assert sq == TiltElement.one(Q2) + TiltElement.monomial(Q2, 2)


def test_mul_cap_rule():
    w = TiltElement.variable(Q2)
    x = (TiltElement.one(Q2) + w).truncate(E(2, 4))
    y = TiltElement.monomial(Q2, 2).truncate(E(2, 5))
    prod = x * y
    # cap = min(4 + 2, 5 + 0) = 5
    assert prod.cap == E(2, 5)
    z = tilt_arith(x, y, "add")
    assert z.cap == E(2, 4)


def test_inverse_monomial():
    w = TiltElement.variable(Q2)
    inv = tilt_inv(w, 4)
    assert inv.coefficient(E(2, -1)) == FFElement.one(2)
    assert (inv * w).coefficient(E(2, 0)) == FFElement.one(2)


def test_inverse_geometric_series():
    x = TiltElement.one(Q2) + TiltElement.variable(Q2)
    inv = tilt_inv(x, 4)
    expect = TiltElement(Q2, [(E(2, i), FFElement.one(2)) for i in range(4)], E(2, 4))
    assert inv == expect
    assert (x * inv).agrees_below(TiltElement.one(Q2), E(2, 4))


def test_inverse_of_constant_is_finite_field_inverse():
    c = FFElement.gen(2, 2)  # generator of F_4, inside the f=1 tower
    x = TiltElement.constant(Q2, c)
    inv = tilt_inv(x, 4)
    assert inv.coefficient(E(2, 0)) == c ** (4 - 2)
    assert inv.coefficient(E(2, 0)) == c.inverse()


def test_zero_divisor_error():
    z = TiltElement.zero(Q2, E(2, 3))
    with pytest.raises(NotInvertibleError):
        tilt_inv(z, 5)


def test_frobenius_basic():
    w = TiltElement.variable(Q2)
    assert tilt_frobenius(w, 1) == TiltElement.monomial(Q2, 2)
    assert tilt_frobenius(w, -1) == TiltElement.monomial(Q2, Fraction(1, 2))
    assert tilt_frobenius(tilt_frobenius(w, -1), 1) == w


def test_frobenius_root_of_coefficient():
    # generator c of F_4 over q=2: the square root of c is c^2
    c = FFElement.gen(2, 2)
    x = TiltElement.monomial(Q2, 1, c)
    y = tilt_frobenius(x, -1)
    assert y.coefficient(E(2, Fraction(1, 2))) == c ** 2
    assert tilt_frobenius(y, 1) == x


def test_abs_values():
    w = TiltElement.variable(Q2)
    a = tilt_abs(w)
    assert a.exact and a.value == LogNorm(Fraction(-2))  # -q/(q-1) = -2 for q=2
    unit = TiltElement.one(Q2) + w
    assert tilt_abs(unit).value == LogNorm(Fraction(0))
    for n in range(1, 5):
        phi_n = w.frobenius_p(-n)
        assert tilt_abs(phi_n).value == LogNorm(Fraction(-2, 2 ** n))
    # zero up to a finite cap: lower bound only
    z = TiltElement.zero(Q2, E(2, 3))
    az = tilt_abs(z)
    assert not az.exact and az.upper == LogNorm(3 * theta(Q2))


def _random_tilt(rng, spec, nterms=4, span=4, cap=None, denom=2):
    terms = []
    for _ in range(rng.randrange(nterms + 1)):
        num = rng.randrange(-span * denom, span * denom)
        m = Exponent(spec.p, num, rng.randrange(0, 2))
        k = rng.choice([1, 1, 2])
        n = spec.f * k
        c = FFElement(spec.p, n, [rng.randrange(spec.p) for _ in range(n)])
        if not c.is_zero():
            terms.append((m, c))
    return TiltElement(spec, terms, cap)


@pytest.mark.parametrize("spec", [Q2, Q3, Q2F2])
def test_field_axioms_on_random_samples(spec):
    rng = random.Random(17)
    one = TiltElement.one(spec)
    for _ in range(40):
        x = _random_tilt(rng, spec)
        y = _random_tilt(rng, spec)
        z = _random_tilt(rng, spec)
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        assert x + y == y + x
        assert x * one == x


@pytest.mark.parametrize("spec", [Q2, Q3])
def test_abs_multiplicative_and_ultrametric(spec):
    rng = random.Random(23)
    for _ in range(60):
        x = _random_tilt(rng, spec)
        y = _random_tilt(rng, spec)
        ax, ay = tilt_abs(x).value, tilt_abs(y).value
        assert tilt_abs(x * y).value == ax + ay
        s = tilt_abs(x + y).value
        assert s.leq(ax.max(ay))
        if ax != ay:
            assert s == ax.max(ay)


def test_frobenius_field_homomorphism_and_norm_scaling():
    rng = random.Random(29)
    for _ in range(30):
        x = _random_tilt(rng, Q2)
        y = _random_tilt(rng, Q2)
        assert (x * y).frobenius_q(1) == x.frobenius_q(1) * y.frobenius_q(1)
        assert (x + y).frobenius_q(1) == x.frobenius_q(1) + y.frobenius_q(1)
        assert x.frobenius_q(1).frobenius_q(-1) == x
        ax = tilt_abs(x).value
        assert tilt_abs(x.frobenius_q(1)).value == ax.scale(Q2.q)


def test_small_ideal_membership():
    w = TiltElement.variable(Q2)
    x = TiltElement.monomial(Q2, 3)
    assert x.in_small_ideal(3)
    assert x.in_small_ideal(2)
    assert not x.in_small_ideal(4)
    # closed under addition, absorbs multiplication by integral elements
    y = TiltElement.monomial(Q2, 5)
    assert (x + y).in_small_ideal(3)
    unit = TiltElement.one(Q2) + w
    assert (x * unit).in_small_ideal(3)
