import random

import pytest

from periodlab.base import (
    GammaElement,
    LocalFieldPair,
    LocalFieldSpec,
    OElement,
    chi_norm_transfer,
    embed_o,
    norm_map,
    olocal_arith,
)
from periodlab.errors import (
    MixedSpecError,
    NotInvertibleError,
    PrecisionError,
    ValidationError,
)

Q2 = LocalFieldSpec.unramified(2, 1, 8)
Q3 = LocalFieldSpec.unramified(3, 1, 6)
Q2_SQRT2 = LocalFieldSpec(p=2, e=2, f=1, eisenstein=(-2, 0, 1), N=8)
Q2_UNRAM2 = LocalFieldSpec.unramified(2, 2, 8)
Q3_ZETA3 = LocalFieldSpec(p=3, e=2, f=1, eisenstein=(3, 3, 1), N=6)
# bases with precision matched to e12 * N1 for the ramified pairs
Q2_BASE4 = LocalFieldSpec.unramified(2, 1, 4)
Q3_BASE3 = LocalFieldSpec.unramified(3, 1, 3)


def test_spec_validation():
    with pytest.raises(ValidationError):
        LocalFieldSpec(p=4, e=1, f=1, eisenstein=(-4, 1), N=4)
    with pytest.raises(ValidationError):
        LocalFieldSpec(p=2, e=2, f=1, eisenstein=(-4, 0, 1), N=4)  # v(c0) = 2
    with pytest.raises(ValidationError):
        LocalFieldSpec(p=2, e=2, f=1, eisenstein=(-2, 1, 1), N=4)  # middle not div by p
    assert Q2.q == 2 and Q2_UNRAM2.q == 4


def test_pi_plus_pi_add():
    # (pi, pi, add) -> 2*pi with valuation 1 for odd p
    pi = OElement.pi(Q3)
    s = olocal_arith(pi, pi, "add")
    assert s == OElement.from_int(Q3, 6)
    assert s.valuation() == 1


def test_one_inverse_trivial():
    one = OElement.one(Q2)
    assert olocal_arith(one, None, "inv") == one


def test_valuation_of_2_in_ramified_quadratic():
    # oracle: 2 = pi^2 from the defining relation t^2 - 2 = 0
    two = OElement.from_int(Q2_SQRT2, 2)
    assert olocal_arith(two, None, "val") == 2
    pi = OElement.pi(Q2_SQRT2)
    assert pi * pi == two
    assert pi.valuation() == 1


def test_canonical_form_add_neg_and_units():
    rng = random.Random(7)
    for spec in (Q2, Q2_SQRT2, Q3_ZETA3, Q2_UNRAM2):
        for _ in range(25):
            x = _random_element(rng, spec)
            assert (x + (-x)).is_zero()
            u = _random_unit(rng, spec)
            assert u * u.inverse() == OElement.one(spec)


def test_valuation_multiplicative():
    rng = random.Random(11)
    for spec in (Q2, Q2_SQRT2, Q3_ZETA3):
        for _ in range(40):
            x = _random_element(rng, spec)
            y = _random_element(rng, spec)
            vx, vy = x.valuation(), y.valuation()
            if vx is None or vy is None or vx + vy >= spec.N:
                continue
            assert (x * y).valuation() == vx + vy


def _random_element(rng, spec, k=1):
    x = OElement.zero(spec, prec=spec.N)
    for j in range(spec.N):
        digit = rng.randrange(spec.q ** k)
        if digit:
            g = OElement.unramified_gen(spec, k) if k > 1 else OElement.one(spec)
            acc = OElement.zero(spec)
            d = digit
            i = 0
            while d:
                if d % spec.p:
                    acc = acc + OElement.from_int(spec, d % spec.p) * g ** i
                d //= spec.p
                i += 1
            x = x + acc * OElement.pi(spec) ** j
    return x


def _random_unit(rng, spec, k=1):
    while True:
        x = _random_element(rng, spec, k)
        if x.valuation() == 0:
            return x


def test_divide_pi_roundtrip():
    rng = random.Random(3)
    for spec in (Q2, Q2_SQRT2, Q3_ZETA3):
        pi = OElement.pi(spec)
        for _ in range(20):
            x = _random_element(rng, spec)
            y = (x * pi).divide_pi()
            assert y == x.reduce_precision(spec.N - 1)


def test_frobenius_fixes_base_and_moves_generator():
    spec = Q2_UNRAM2
    a = OElement.from_int(spec, 7)
    assert a.frobenius(1) == a
    y = OElement.unramified_gen(spec, 2)  # degree-2 part over the f=2 base
    fy = y.frobenius(1)
    assert fy != y
    assert fy.frobenius(1) == y  # order 2 over the base


def test_norm_identity_pair():
    pair = LocalFieldPair.identity(Q2)
    u = OElement.from_int(Q2, 13)
    assert norm_map(pair, u) == u


def test_norm_sqrt2():
    # oracle: multiplication matrix of pi on basis {1, pi} is [[0,2],[1,0]], det = -2
    pair = LocalFieldPair(Q2_BASE4, Q2_SQRT2, OElement.from_int(Q2_SQRT2, 2))
    val = norm_map(pair, OElement.pi(Q2_SQRT2))
    assert val == OElement.from_int(Q2_BASE4, -2)


def test_norm_cyclotomic():
    # Q_3(zeta_3): E = ((1+t)^3 - 1)/t = t^2 + 3t + 3; N(pi) = 3
    pair = LocalFieldPair(Q3_BASE3, Q3_ZETA3, OElement.from_int(Q3_ZETA3, 3))
    val = norm_map(pair, OElement.pi(Q3_ZETA3))
    assert val == OElement.from_int(Q3_BASE3, 3)


def test_norm_multiplicative():
    rng = random.Random(5)
    pair = LocalFieldPair(Q2_BASE4, Q2_SQRT2, OElement.from_int(Q2_SQRT2, 2))
    for _ in range(10):
        u = _random_unit(rng, Q2_SQRT2)
        v = _random_unit(rng, Q2_SQRT2)
        assert norm_map(pair, u * v) == norm_map(pair, u) * norm_map(pair, v)


def test_norm_unramified_pair():
    pair = LocalFieldPair(Q2, Q2_UNRAM2, OElement.from_int(Q2_UNRAM2, 2))
    got = norm_map(pair, OElement.from_int(Q2_UNRAM2, 3))
    assert got == OElement.from_int(Q2, 9)
    # norm of the Teichmueller generator: y * y^2 = y^3 = 1 in F_4 lifts to 1
    y = OElement.unramified_gen(Q2_UNRAM2, 1)
    assert norm_map(pair, y) == OElement.one(Q2)


def test_norm_valuation_bookkeeping():
    # v1(N(pi2)) = d for both built-in quadratic pairs
    ram = LocalFieldPair(Q2_BASE4, Q2_SQRT2, OElement.from_int(Q2_SQRT2, 2))
    assert norm_map(ram, OElement.pi(Q2_SQRT2)).valuation() == 1  # d = 1
    unram = LocalFieldPair(Q2, Q2_UNRAM2, OElement.from_int(Q2_UNRAM2, 2))
    assert norm_map(unram, OElement.from_int(Q2_UNRAM2, 2)).valuation() == 2  # d = 2


def test_norm_precision_guard():
    pair = LocalFieldPair(Q2_BASE4, Q2_SQRT2, OElement.from_int(Q2_SQRT2, 2))
    low = OElement.pi(Q2_SQRT2).reduce_precision(3)
    with pytest.raises(PrecisionError) as err:
        norm_map(pair, low)
    assert err.value.achievable is not None and err.value.achievable < Q2_BASE4.N


def test_gamma_compose_laws():
    spec = Q2
    ident = GammaElement.identity(spec)
    g = GammaElement(OElement.from_int(spec, 3), 2)
    assert ident.compose(g) == g
    ginv = g.inverse()
    assert g.compose(ginv) == ident
    u = OElement.from_int(spec, 1) + OElement.pi(spec)
    h = GammaElement(u, 0)
    assert h.compose(h).u == u * u
    # abelian: compose commutes
    assert g.compose(h) == h.compose(g)
    # associative
    k = GammaElement(OElement.from_int(spec, 5), -1)
    assert g.compose(h).compose(k) == g.compose(h.compose(k))


def test_gamma_requires_unit():
    with pytest.raises(ValidationError):
        GammaElement(OElement.pi(Q2), 0)


def test_chi_norm_transfer():
    pair = LocalFieldPair(Q2, Q2_UNRAM2, OElement.from_int(Q2_UNRAM2, 2))
    g2 = GammaElement.frobenius(Q2_UNRAM2, 1)
    g1 = chi_norm_transfer(pair, g2)
    assert g1.a == pair.d  # norm of pi2 = pi1^d * unit
    # transfer respects composition
    h2 = GammaElement(OElement.from_int(Q2_UNRAM2, 3), 0)
    lhs = chi_norm_transfer(pair, g2.compose(h2))
    rhs = chi_norm_transfer(pair, g2).compose(chi_norm_transfer(pair, h2))
    assert lhs.a == rhs.a and (lhs.u - rhs.u).is_zero()


def test_mixed_spec_errors():
    with pytest.raises(MixedSpecError):
        OElement.one(Q2) + OElement.one(Q3)
    with pytest.raises(NotInvertibleError):
        OElement.pi(Q2_SQRT2).inverse()
