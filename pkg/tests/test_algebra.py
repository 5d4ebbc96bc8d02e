import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffgeom.algebra import (
    AbsValue,
    FieldSpec,
    LaurentTail,
    Poly,
    RatFunc,
    abs_value,
    format_ratfunc,
    parse_ratfunc,
    product_norm,
    rho_pi,
    split_integer_fractional,
    tail_of,
    vec_norm,
)
from ffgeom.errors import EmptyVector, NotFiniteTail, ParseError, ZeroDenominator, ZeroInput
from conftest import rf

PRIMES = [2, 3, 5, 7]


@st.composite
def ratfuncs(draw, p=None, nonzero=False):
    p = p or draw(st.sampled_from(PRIMES))
    num = draw(st.lists(st.integers(0, p - 1), max_size=5))
    den = draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=4).filter(any))
    f = RatFunc(Poly(num, p), Poly(den, p))
    if nonzero and f.is_zero():
        f = RatFunc.one(p)
    return f


def test_field_spec():
    assert FieldSpec(3).q == 3
    for bad in (1, 4, 9, 1 << 16):
        with pytest.raises(ValueError):
            FieldSpec(bad)


def test_poly_canonical():
    assert Poly([1, 2, 0, 0], 3).coeffs == (1, 2)
    assert Poly([3, 6], 3).is_zero()
    assert Poly.zero(3).degree == float("-inf")
    assert Poly([0, 0, 1], 2).degree == 2


def test_poly_divmod_and_gcd():
    p = 5
    a = Poly([1, 2, 3, 4], p)
    b = Poly([2, 0, 1], p)
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@pytest.mark.parametrize(
    "text, expected",
    [("x^3+1", AbsValue(3)), ("0", AbsValue.zero()), ("x^2/(x^3+1)", AbsValue(-1))],
)
def test_abs_value_examples(text, expected):
    assert abs_value(rf(text)) == expected


def test_abs_order():
    assert AbsValue.zero() < AbsValue(-100) < AbsValue(0) < AbsValue(2)
    assert AbsValue(2) * AbsValue(-5) == AbsValue(-3)
    assert AbsValue(2) * AbsValue.zero() == AbsValue.zero()
    assert str(AbsValue(-3)) == "q^-3"


@pytest.mark.parametrize(
    "text, rho, pi",
    [("x^2", 2, "1"), ("(x+1)/x", 0, "(x+1)/x"), ("1/x^3", -3, "1")],
)
def test_rho_pi_examples(text, rho, pi):
    assert rho_pi(rf(text)) == (rho, rf(pi))


def test_rho_pi_zero():
    with pytest.raises(ZeroInput):
        rho_pi(RatFunc.zero(3))


@pytest.mark.parametrize(
    "text, poly, frac",
    [("(x^2+1)/x", "x", "1/x"), ("x^3", "x^3", "0"), ("1/(x+1)", "0", "1/(x+1)")],
)
def test_split_examples(text, poly, frac):
    Q, r = split_integer_fractional(rf(text))
    assert RatFunc(Q) == rf(poly)
    assert r == rf(frac)


def test_tail_examples():
    t = tail_of(rf("1/x+1/x^2+1/x^4"))
    assert t.coeffs == (1, 1, 0, 1) and t.h == 4
    assert tail_of(rf("x^2")).h == 0
    with pytest.raises(NotFiniteTail):
        tail_of(rf("1/(x+1)"))


def test_tail_trimmed_and_abs():
    t = LaurentTail((0, 2, 0, 0), 3)
    assert t.coeffs == (0, 2) and t.h == 2
    assert t.abs() == AbsValue(-2)
    assert LaurentTail((), 3).abs().is_zero()
    assert t.to_ratfunc() == rf("2/x^2")


def test_vec_and_product_norms():
    assert vec_norm([rf("x"), rf("1/x")]) == AbsValue(1)
    assert vec_norm([rf("0"), rf("0")]).is_zero()
    assert vec_norm([rf("1/x^2"), rf("1/x^2")]) == AbsValue(-2)
    assert product_norm([rf("1/x")] * 3) == AbsValue(-3)
    assert product_norm([rf("x"), rf("0")]).is_zero()
    assert product_norm([rf("x^2"), rf("1/x")]) == AbsValue(1)
    with pytest.raises(EmptyVector):
        vec_norm([])
    with pytest.raises(EmptyVector):
        product_norm([])


def test_parse_examples():
    f = parse_ratfunc("1/x+1/x^2+1/x^4", 3)
    assert f.num == Poly([1, 0, 1, 1], 3) and f.den == Poly([0, 0, 0, 0, 1], 3)
    assert parse_ratfunc("0", 3) == RatFunc.zero(3)
    with pytest.raises(ZeroDenominator):
        parse_ratfunc("x^2/0", 3)


def test_parse_forms():
    assert parse_ratfunc(" 2*x^3 + x - 4 ", 3) == RatFunc(Poly([2, 1, 0, 2], 3))
    assert parse_ratfunc("2x", 3) == parse_ratfunc("2*x", 3)
    assert parse_ratfunc("5", 3) == RatFunc.from_int(2, 3)


@pytest.mark.parametrize("text", ["", "x^", "1/", "x+*2", "(x", "x)", "y"])
def test_parse_errors(text):
    with pytest.raises(ParseError) as info:
        parse_ratfunc(text, 3)
    assert info.value.offset >= 0 and info.value.expected


def test_canonical_form():
    f = RatFunc(Poly([2, 2], 3), Poly([0, 2], 3))  # (2x+2)/(2x)
    assert f.den.lc == 1
    assert f == rf("(x+1)/x")
    assert RatFunc(Poly.zero(3), Poly([1, 1], 3)).den == Poly.one(3)


def test_format_examples():
    assert format_ratfunc(rf("1/x+1/x^2+1/x^4")) == "1/x+1/x^2+1/x^4"
    assert format_ratfunc(rf("x^2+2")) == "x^2+2"


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_ultrametric_and_multiplicative(data):
    p = data.draw(st.sampled_from(PRIMES))
    f, g = data.draw(ratfuncs(p)), data.draw(ratfuncs(p))
    s = (f + g).abs()
    assert s <= max(f.abs(), g.abs())
    if f.abs() != g.abs():
        assert s == max(f.abs(), g.abs())
    assert (f * g).abs() == f.abs() * g.abs()


def test_ultrametric_bulk():
    rng = random.Random(7)
    for _ in range(10_000):
        p = rng.choice(PRIMES)
        f = RatFunc(Poly([rng.randrange(p) for _ in range(4)], p), Poly([rng.randrange(p) for _ in range(3)] + [1], p))
        g = RatFunc(Poly([rng.randrange(p) for _ in range(4)], p), Poly([rng.randrange(p) for _ in range(3)] + [1], p))
        s = (f + g).abs()
        assert s <= max(f.abs(), g.abs())
        if f.abs() != g.abs():
            assert s == max(f.abs(), g.abs())


@settings(max_examples=200, deadline=None)
@given(ratfuncs(nonzero=True))
def test_rho_pi_roundtrip(f):
    rho, pi = rho_pi(f)
    assert RatFunc.x_power(rho, f.p) * pi == f
    assert pi.abs() == AbsValue(0)


@settings(max_examples=200, deadline=None)
@given(ratfuncs())
def test_split_roundtrip(f):
    Q, r = split_integer_fractional(f)
    assert RatFunc(Q) + r == f
    assert r.is_zero() or r.abs() <= AbsValue(-1)


@settings(max_examples=300, deadline=None)
@given(ratfuncs())
def test_parser_roundtrip(f):
    assert parse_ratfunc(format_ratfunc(f), f.p) == f
