import pytest
from hypothesis import given, settings, strategies as st

from periodlab.gf import (
    FFElement,
    ZqElement,
    factorize,
    nullspace_fp,
    solve_fp,
    tower_polynomial,
    zq_modulus,
)


def test_factorize_small():
    assert factorize(1) == {}
    assert factorize(12) == {2: 2, 3: 1}
    assert factorize(65535) == {3: 1, 5: 1, 17: 1, 257: 1}


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (2, 6)])
def test_tower_polynomial_is_primitive(p, n):
    g = tower_polynomial(p, n)
    assert len(g) == n + 1 and g[-1] == 1
    x = FFElement.gen(p, n)
    order = p ** n - 1
    assert x ** order == FFElement.one(p, n)
    for ell in factorize(order):
        assert x ** (order // ell) != FFElement.one(p, n)


@pytest.mark.parametrize("p", [2, 3])
def test_tower_embeddings_commute(p):
    # F_{p} -> F_{p^2} -> F_{p^4} agrees with F_{p} -> F_{p^4}, on generators
    a = FFElement.gen(p, 2)
    assert a.embed(4).embed(8) == a.embed(8)
    b = FFElement.gen(p, 1)
    assert b.embed(2).embed(4) == b.embed(4)


def test_embedding_respects_arithmetic():
    p = 2
    a = FFElement.gen(p, 2)
    b = a * a + FFElement.one(p, 2)
    assert (a + b).embed(4) == a.embed(4) + b.embed(4)
    assert (a * b).embed(4) == a.embed(4) * b.embed(4)


def test_minimal_subfield_reduction():
    p = 2
    one4 = FFElement.one(p, 4)
    assert one4.reduce_minimal().n == 1
    g = FFElement.gen(p, 4)
    sub = g ** ((2 ** 4 - 1) // (2 ** 2 - 1))  # norm-compatible image of the F_4 generator
    red = sub.reduce_minimal()
    assert red.n == 2
    assert red == FFElement.gen(p, 2)


@settings(max_examples=60, derandomize=True)
@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_f16_field_axioms(ia, ib, ic):
    p = 2
    def mk(i):
        return FFElement(p, 4, [(i >> j) & 1 for j in range(4)])
    a, b, c = mk(ia), mk(ib), mk(ic)
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if not a.is_zero():
        assert a * a.inverse() == FFElement.one(p, 4)


def test_frobenius_inverse_roundtrip():
    x = FFElement.gen(3, 2)
    assert x.frobenius_p(1).frobenius_p(-1) == x
    assert x.frobenius_p(2) == x  # p^n-power is identity


def test_solve_and_nullspace():
    sol = solve_fp([[1, 1], [0, 1]], [0, 1], 2)
    assert sol == [1, 1]
    ns = nullspace_fp([[1, 1, 0]], 2)
    assert len(ns) == 2


def test_zq_modulus_properties():
    p, n, M = 2, 2, 5
    h = zq_modulus(p, n, M)
    assert len(h) == n + 1 and h[-1] == 1
    # reduces to the tower polynomial mod p
    assert tuple(c % p for c in h) == tower_polynomial(p, n)
    # the generator is Teichmueller: y^(p^n - 1) == 1 exactly
    y = ZqElement.gen(p, n, M)
    assert y ** (p ** n - 1) == ZqElement.one(p, n, M)


def test_zq_arithmetic_and_inverse():
    p, n, M = 3, 2, 4
    y = ZqElement.gen(p, n, M)
    a = y * y + ZqElement.from_int(p, n, M, 5)
    ainv = a.inverse()
    assert a * ainv == ZqElement.one(p, n, M)
    with pytest.raises(Exception):
        ZqElement.from_int(p, n, M, 3).inverse()


def test_zq_frobenius_is_ring_hom_and_exact_on_teichmuller():
    p, n, M = 2, 4, 6
    y = ZqElement.gen(p, n, M)
    a = y ** 3 + ZqElement.from_int(p, n, M, 9)
    b = y + ZqElement.from_int(p, n, M, 2)
    assert (a * b).frobenius_p(1) == a.frobenius_p(1) * b.frobenius_p(1)
    assert (a + b).frobenius_p(1) == a.frobenius_p(1) + b.frobenius_p(1)
    assert a.frobenius_p(1).frobenius_p(n - 1) == a
    assert y.frobenius_p(1) == y ** p


def test_zq_embedding_compatible_with_residue():
    p, M = 2, 4
    a = ZqElement.gen(p, 2, M)
    up = a.embed(4)
    assert up.residue() == a.residue().embed(4)
    assert (a * a).embed(4) == up * up


def test_zq_divide_p():
    p, n, M = 2, 1, 5
    a = ZqElement.from_int(p, n, M, 12)
    half = a.divide_p(2)
    assert half == ZqElement.from_int(p, n, M - 2, 3)
    assert a.vp() == 2
    assert ZqElement.zero(p, n, M).vp() is None


def test_teichmuller_part():
    p, n, M = 5, 1, 4
    a = ZqElement.from_int(p, n, M, 2)
    t = a.teichmuller_part()
    assert t ** (p - 1) == ZqElement.one(p, n, M)
    assert t.residue() == a.residue()
