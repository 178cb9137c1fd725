import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from defectlab.cuts import ExtRat, PLUS_INF
from defectlab.series import (
    Polynomial,
    PrecisionError,
    Series,
    invert,
    make_mixed_context,
    newton_root,
    zeta_p,
)


def q(n, d=1):
    return Fraction(n, d)


M2 = make_mixed_context(2)
M3 = make_mixed_context(3)


def test_carry_identity_p2():
    a = Series.one(M2) + Series.monomial(M2, q(1, 2))
    s = a + a
    assert s.terms == ((q(1), 1), (q(3, 2), 1))


def test_from_rational_digits():
    three = Series.from_int(M2, 3)
    assert three.terms == ((q(0), 1), (q(1), 1))
    # 1/2 at p = 3 has all Teichmueller digits equal to 2
    half = Series.from_rational(M3, q(1, 2), ExtRat.of(q(4)))
    assert half.terms == tuple((q(k), 2) for k in range(4))
    # and is exactly minus the all-ones series
    minus_half = half.neg()
    assert minus_half.terms == tuple((q(k), 1) for k in range(4))


def test_negative_integer_exact_p3():
    m2 = Series.from_int(M3, -2)
    assert not m2.precision.is_finite
    assert (m2 + Series.from_int(M3, 2)).is_zero


def test_p2_negative_needs_finite_precision():
    with pytest.raises(PrecisionError):
        Series.from_int(M2, -1)
    m1 = Series.from_rational(M2, q(-1), ExtRat.of(q(5)))
    assert m1.terms == tuple((q(k), 1) for k in range(5))
    assert (m1 + Series.one(M2)).is_zero


def test_subtraction_with_borrows():
    a = Series.from_int(M2, 9)
    b = Series.from_int(M2, 1)
    d = a - b
    assert d.terms == ((q(3), 1),)  # 8
    assert d.valuation() == ExtRat.of(q(3))


def test_mul_uses_teichmueller_digits():
    # tau is multiplicative, so single-digit terms multiply term-by-term
    x = Series.monomial(M3, q(1, 2), 2)
    assert (x * x).terms == ((q(1), 1),)  # tau(2)^2 = tau(4) = tau(1)
    y = Series.from_int(M3, -1)
    assert (y * y).terms == ((q(0), 1),)


def test_valuation_example():
    a = Series.make(M2, {q(3, 2): 1, q(2): 1})
    assert a.valuation() == ExtRat.of(q(3, 2))
    assert a.leading_coeff() == 1


def test_add_associative_to_common_precision():
    rng = random.Random(21)
    for ctx in (M2, M3):
        for _ in range(60):
            def rand():
                terms = {}
                for _ in range(rng.randint(1, 4)):
                    e = Fraction(rng.randint(-4, 6), rng.choice([1, ctx.p, ctx.p ** 2]))
                    terms[e] = rng.randint(1, ctx.p - 1)
                return Series.make(ctx, terms, ExtRat.of(q(8)))

            a, b, c = rand(), rand(), rand()
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a + b) - b == a.truncate((a + b).precision)


def test_invert_one_plus_p():
    a = Series.one(M2) + Series.monomial(M2, 1)
    s = invert(a, ExtRat.of(q(6)))
    prod = a * s
    one = Series.one(M2)
    assert (prod - one).vlow() >= ExtRat.of(q(6))


def test_zeta_2_is_minus_one():
    z = zeta_p(M2, ExtRat.of(q(8)))
    assert z.terms == tuple((q(k), 1) for k in range(8))
    assert (z + Series.one(M2)).is_zero
    assert (z - Series.one(M2)).valuation() == ExtRat.of(q(1))  # v(p)/(p-1)
    sq = z * z
    assert (sq - Series.one(M2)).vlow() >= ExtRat.of(q(8))


def test_zeta_3_needs_extension_field():
    with pytest.raises(ValueError):
        zeta_p(M3, ExtRat.of(q(4)))


M9 = make_mixed_context(3, 2)


def test_zeta_3_valuation_and_order():
    z = zeta_p(M9, ExtRat.of(q(6)))
    one = Series.one(M9)
    d = z - one
    assert d.valuation() == ExtRat.of(q(1, 2))
    cube = z * z * z
    assert (cube - one).vlow() >= ExtRat.of(q(6))
    # both primitive powers sit at distance 1/2 from 1
    z2 = z * z
    assert (z2 - one).valuation() == ExtRat.of(q(1, 2))


def test_newton_sqrt_of_nine():
    # X^2 - 9 from start 1 converges to the odd square root 3 or -3;
    # the reported precision loses v(f') = v(2x) = 1
    nine = Series.from_int(M2, 9).truncate(ExtRat.of(q(10)))
    f = Polynomial.make((nine.neg(), Series.zero(M2), Series.one(M2)))
    r = newton_root(f, Series.one(M2, ExtRat.of(q(10))), ExtRat.of(q(8)))
    assert r.precision == ExtRat.of(q(7))
    check = r * r - nine
    assert check.vlow() >= ExtRat.of(q(7))


def test_newton_sqrt_one_plus_p_cubed():
    a = (Series.one(M2) + Series.monomial(M2, 3)).truncate(ExtRat.of(q(12)))
    f = Polynomial.make((a.neg(), Series.zero(M2, ExtRat.of(q(12))), Series.one(M2)))
    r = newton_root(f, Series.one(M2, ExtRat.of(q(12))), ExtRat.of(q(9)))
    assert (r * r - a).vlow() >= ExtRat.of(q(8))
    assert (r - Series.one(M2)).valuation() >= ExtRat.of(q(1))


@st.composite
def _mixed_series(draw, ctx=M2):
    n = draw(st.integers(0, 3))
    terms = {}
    for _ in range(n):
        num = draw(st.integers(-8, 12))
        den = draw(st.sampled_from([1, 2, 4]))
        terms[Fraction(num, den)] = draw(st.integers(1, ctx.p - 1))
    return Series.make(ctx, terms, ExtRat.of(q(8)))


@settings(max_examples=60, deadline=None)
@given(_mixed_series(), _mixed_series(), _mixed_series())
def test_mixed_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    prod = a * (b + c)
    both = a * b + a * c
    assert prod.truncate(both.precision) == both.truncate(prod.precision)


def test_extension_field_carries():
    # in F_9 digits, tau(c)^2 = tau(c^2) = -1 for c with c^2 = -1
    f9 = M9.field
    c = next(a for a in f9.elements() if f9.mul(a, a) == f9.neg(1))
    x = Series.monomial(M9, q(1, 2), c, ExtRat.of(q(6)))
    sq = x * x
    # tau(-1) = -1 exactly: the square is -p, whose digit expansion is
    # tau(2) * p = 2's lift times p
    minus_p = Series.from_rational(M9, q(-3), ExtRat.of(q(8)))
    diff = sq - minus_p
    assert diff.is_zero or diff.vlow() >= ExtRat.of(q(6))
