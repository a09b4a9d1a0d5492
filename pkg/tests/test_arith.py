import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from orbihh.arith import (
    Cyclotomic,
    ScalarParseError,
    SqrtPosReal,
    cyclo_add,
    cyclo_conj,
    cyclo_embed,
    cyclo_inv,
    cyclo_mul,
    cyclo_neg,
    cyclo_reduce,
    cyclotomic_polynomial,
    euler_phi,
    format_scalar,
    parse_scalar,
)

ORDERS = [1, 2, 3, 4, 5, 6, 8, 12]

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cyclos(draw, order=None):
    n = order if order is not None else draw(st.sampled_from(ORDERS))
    coeffs = draw(st.lists(small_fracs, min_size=n, max_size=n))
    return cyclo_reduce(coeffs, n)


@st.composite
def same_order_pair(draw):
    n = draw(st.sampled_from(ORDERS))
    return draw(cyclos(n)), draw(cyclos(n))


def close(a: complex, b: complex) -> bool:
    return abs(a - b) < 1e-8 * (1 + abs(a) + abs(b))


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_polynomial_matches_sympy(n):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in expected]
    assert euler_phi(n) == len(expected) - 1


def test_phi12_and_zeta_relations():
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    z = Cyclotomic.zeta(12)
    assert z ** 12 == 1
    assert z ** 6 == -1
    assert z ** 4 + z ** -4 == -1
    assert Cyclotomic.zeta(3) + Cyclotomic.zeta(3, 2) + 1 == 0


@given(cyclos(), cyclos(), cyclos())
def test_ring_axioms_mixed_orders(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == 0


@given(cyclos())
def test_inverse(a):
    assume(a)
    assert a * a.inverse() == 1
    assert cyclo_inv(a) * a == 1


@given(same_order_pair())
def test_embedding_is_a_ring_map(pair):
    a, b = pair
    assert close(cyclo_embed(a + b), a.embed() + b.embed())
    assert close(cyclo_embed(a * b), a.embed() * b.embed())
    assert close(cyclo_embed(cyclo_conj(a)), a.embed().conjugate())


@given(cyclos(), st.sampled_from([2, 3]))
def test_lift_preserves_value_and_hash(a, k):
    lifted = a.lift(a.order * k)
    assert lifted == a
    assert hash(lifted) == hash(a)
    assert close(lifted.embed(), a.embed())


@given(same_order_pair())
def test_functional_wrappers(pair):
    a, b = pair
    assert cyclo_add(a, b) == a + b
    assert cyclo_mul(a, b) == a * b
    assert cyclo_neg(a) == -a


def test_zeta_embeds_to_root_of_unity():
    for n in ORDERS:
        assert close(Cyclotomic.zeta(n).embed(), cmath.exp(2j * cmath.pi / n))


def test_real_and_positive():
    z = Cyclotomic.zeta(8)
    sqrt2 = z + z.conj()
    assert sqrt2.is_real()
    assert sqrt2 * sqrt2 == 2
    assert sqrt2.is_positive()
    assert not (-sqrt2).is_positive()
    assert not z.is_real()


@given(cyclos())
def test_format_parse_round_trip(a):
    assert parse_scalar(format_scalar(a), a.order) == a


@pytest.mark.parametrize(
    "text, order, expected",
    [
        ("3/2", 1, Cyclotomic.rational(Fraction(3, 2))),
        ("-z^2 + 1", 3, 1 - Cyclotomic.zeta(3, 2)),
        ("(1 + z)*(1 - z)", 4, Cyclotomic.rational(2, 4)),
        ("z^-1", 6, Cyclotomic.zeta(6, 5)),
        ("2*z/4", 5, Cyclotomic.zeta(5) / 2),
    ],
)
def test_parse_examples(text, order, expected):
    assert parse_scalar(text, order) == expected


@pytest.mark.parametrize("text", ["0.5*z", "1.", "z^", "2**z", "(1", "w", "", "1/0"])
def test_parse_rejects(text):
    with pytest.raises((ScalarParseError, ZeroDivisionError)):
        parse_scalar(text, 4)


def test_parse_rejects_floats_specifically():
    with pytest.raises(ScalarParseError):
        parse_scalar("0.5*z", 4)


def test_sqrtpos_compares_squares():
    assert SqrtPosReal.of(4) == SqrtPosReal.of(Cyclotomic.rational(4, 3))
    assert SqrtPosReal.of(2) * SqrtPosReal.of(8) == SqrtPosReal.of(16)
    assert SqrtPosReal.of(9).approx == pytest.approx(3.0)
    with pytest.raises(ValueError):
        SqrtPosReal.of(-1)
    with pytest.raises(ValueError):
        SqrtPosReal.of(Cyclotomic.zeta(4))


@settings(max_examples=30)
@given(cyclos(12))
def test_norm_is_rational_and_nonnegative(a):
    # product of all Galois conjugates of a real element a*conj(a) is a nonnegative rational
    n = a * a.conj()
    assert n.is_real()
    assert n.embed().real >= -1e-12
