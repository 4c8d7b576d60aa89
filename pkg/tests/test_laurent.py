"""Laurent polynomial and dyadic arithmetic against sympy oracles."""

from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from dslice.laurent import DyadicRational, LaurentPoly, poly_gcd, ONE, T


def to_sympy(p: LaurentPoly):
    t = sympy.Symbol("t")
    return sum(c * t**d for d, c in p.coeffs.items())


polys = st.dictionaries(
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=-9, max_value=9),
    max_size=5,
).map(LaurentPoly)


@given(polys, polys)
def test_ring_ops_match_sympy(a, b):
    t = sympy.Symbol("t")
    assert sympy.expand(to_sympy(a) * to_sympy(b) - to_sympy(a * b)) == 0
    assert sympy.expand(to_sympy(a) + to_sympy(b) - to_sympy(a + b)) == 0


@given(polys)
def test_canonical_is_associate_invariant(p):
    for k in (-2, 1, 3):
        for s in (1, -1):
            q = p.shift(k) * s
            assert q.canonical() == p.canonical()
    if p.coeffs:
        assert p.canonical().min_degree() == 0
        assert p.canonical().coeffs[0] > 0


def test_gcd_examples():
    # (t-2)(2t-1) and (t-2)(t+1): gcd is t-2
    f = LaurentPoly({0: 2, 1: -5, 2: 2})
    g = (T - 2 * ONE) * (T + ONE)
    assert poly_gcd(f, g) == (T - 2 * ONE).canonical()
    assert poly_gcd(f, LaurentPoly()) == f.canonical()
    # content is not discarded
    assert poly_gcd(6 * ONE, LaurentPoly({1: 4})) == (2 * ONE)


@given(polys, polys)
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    if g.is_zero():
        assert a.is_zero() and b.is_zero()
        return
    t = sympy.Symbol("t")
    for p in (a, b):
        if p.is_zero():
            continue
        quo, rem = sympy.div(
            sympy.Poly(to_sympy(p.shift(-p.min_degree())), t),
            sympy.Poly(to_sympy(g), t),
            domain="QQ",
        )
        assert rem == 0
        assert all(c.is_integer for c in quo.all_coeffs())


def test_dyadic_normalisation():
    assert DyadicRational(6, 2) == DyadicRational(3, 1)
    assert DyadicRational(0, 5) == DyadicRational(0, 0)
    assert DyadicRational(8, 1).as_pair() == (4, 0)


dyadics = st.tuples(
    st.integers(min_value=-40, max_value=40), st.integers(min_value=0, max_value=5)
).map(lambda p: DyadicRational(*p))


def to_frac(d: DyadicRational) -> Fraction:
    return Fraction(d.num, 2**d.exp)


@given(dyadics, dyadics)
def test_dyadic_field_ops(a, b):
    assert to_frac(a + b) == to_frac(a) + to_frac(b)
    assert to_frac(a - b) == to_frac(a) - to_frac(b)
    assert to_frac(a * b) == to_frac(a) * to_frac(b)
    assert to_frac(a.times_power_of_two(3)) == to_frac(a) * 8


def test_evaluate_dyadic():
    p = LaurentPoly({-1: 1, 0: -2})  # t^-1 - 2
    assert p.evaluate_dyadic(1) == DyadicRational(-3, 1)  # 1/2 - 2
    assert p.evaluate_dyadic(-1) == DyadicRational(0)  # at t=1/2: 2 - 2


def test_symmetry_check():
    delta_trefoil = LaurentPoly({0: 1, 1: -1, 2: 1})
    assert delta_trefoil.is_symmetric()
    assert not (T - 2 * ONE).is_symmetric()
