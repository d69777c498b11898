import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isingloops.ring import (
    CYCLO_ONE,
    CycloNum,
    MONO_ONE,
    TagMonomial,
    TaggedPoly,
    XSeries,
    cyclo_pow,
    project_mode_sum,
    series_exp,
    series_log,
    series_sqrt,
)


def mono(**kw):
    return TagMonomial(**kw)


class TestCycloNum:
    def test_power_six_is_minus_one(self):
        assert cyclo_pow(6) == CycloNum(-1)
        assert cyclo_pow(6).coords == (Fraction(-1), 0, 0, 0)

    def test_power_zero_is_one(self):
        assert cyclo_pow(0) == CycloNum(1)

    def test_power_four_reduces(self):
        # forced by the minimal polynomial z^4 - z^2 + 1
        assert cyclo_pow(4).coords == (Fraction(-1), 0, Fraction(1), 0)

    def test_twelfth_power_is_identity(self):
        assert cyclo_pow(12) == CycloNum(1)
        p = CYCLO_ONE
        for _ in range(12):
            p = p * cyclo_pow(1)
        assert p == CycloNum(1)

    def test_inverse_pairs(self):
        for k in range(12):
            assert cyclo_pow(k) * cyclo_pow((12 - k) % 12) == CycloNum(1)

    def test_cube_is_imaginary_unit(self):
        assert cyclo_pow(3) * cyclo_pow(3) == CycloNum(-1)

    def test_negative_exponents(self):
        assert cyclo_pow(-1) == cyclo_pow(11)
        assert cyclo_pow(-2) * cyclo_pow(2) == CycloNum(1)

    def test_matches_complex_arithmetic(self):
        for k in range(-12, 13):
            expected = cmath.exp(1j * cmath.pi * k / 6)
            got = cyclo_pow(k).as_complex()
            assert abs(got - expected) < 1e-12

    def test_conjugate(self):
        z = cyclo_pow(1) * 3 + cyclo_pow(5) * Fraction(1, 2)
        zc = z.conjugate()
        assert abs(zc.as_complex() - z.as_complex().conjugate()) < 1e-12

    @given(st.lists(st.integers(-6, 6), min_size=12, max_size=12))
    def test_mul_commutes_and_associates(self, raw):
        a = CycloNum(*raw[0:4])
        b = CycloNum(*raw[4:8])
        c = CycloNum(*raw[8:12])
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


class TestTaggedPoly:
    def test_single_term_product(self):
        # (u^2 l^2) * (v^2 m^2) = u^2 v^2 l^2 m^2
        a = TaggedPoly.term(mono(du=2, el=2), 1)
        b = TaggedPoly.term(mono(dv=2, em=2), 1)
        assert a * b == TaggedPoly.term(mono(du=2, dv=2, el=2, em=2), 1)

    def test_difference_of_squares(self):
        # (l + 1/l)(l - 1/l) = l^2 - l^-2
        plus = TaggedPoly({mono(el=1): CYCLO_ONE, mono(el=-1): CYCLO_ONE})
        minus = TaggedPoly({mono(el=1): CYCLO_ONE, mono(el=-1): -CYCLO_ONE})
        expect = TaggedPoly({mono(el=2): CYCLO_ONE, mono(el=-2): -CYCLO_ONE})
        assert plus * minus == expect

    def test_phase_reduction_in_product(self):
        # (A u)(A^5 u) = A^6 u^2 = -u^2
        a = TaggedPoly.term(mono(du=1), cyclo_pow(1))
        b = TaggedPoly.term(mono(du=1), cyclo_pow(5))
        assert a * b == TaggedPoly.term(mono(du=2), CycloNum(-1))

    def test_zero_coefficients_dropped(self):
        p = TaggedPoly.term(MONO_ONE, 1) + TaggedPoly.term(MONO_ONE, -1)
        assert not p
        assert len(p.terms) == 0

    @given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                              st.integers(-3, 3)), max_size=5),
           st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                              st.integers(-3, 3)), max_size=5),
           st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                              st.integers(-3, 3)), max_size=5))
    @settings(max_examples=40)
    def test_mul_commutes_and_associates(self, ta, tb, tc):
        def build(triples):
            p = TaggedPoly()
            for el, em, coef in triples:
                p = p + TaggedPoly.term(mono(el=el, em=em), coef)
            return p

        a, b, c = build(ta), build(tb), build(tc)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)

    def test_substitutions(self):
        p = TaggedPoly.term(mono(du=4, dv=4, dw=4, el=4, em=4, en=4, ep=-2, eq=-2, er=-2), 1)
        assert p.substitute_lmn_one() == TaggedPoly.term(mono(du=4, dv=4, dw=4), 1)
        assert p.substitute_lmn_one().substitute_uvw_one() == TaggedPoly.one()

    def test_evalf(self):
        p = TaggedPoly.term(mono(du=2, el=-2), cyclo_pow(2))
        val = p.evalf(u=2.0, l=3.0)
        assert abs(val - 4.0 / 9.0 * cmath.exp(1j * cmath.pi / 3)) < 1e-12


class TestModeProjection:
    def test_single_mode_symbol_dropped(self):
        s = XSeries(2)
        s.coeffs[1] = TaggedPoly.term(mono(ep=1), 1)
        out = project_mode_sum(s, 10)
        assert not out.coeffs[1]

    def test_zero_exponents_kept(self):
        s = XSeries(2)
        s.coeffs[2] = TaggedPoly.term(MONO_ONE, 7)
        out = project_mode_sum(s, 10)
        assert out.coeffs[2] == TaggedPoly.scalar(7)

    def test_multiple_of_side_survives(self):
        # sum over p of (e^p)^3 with L=3 keeps the term with unit weight
        s = XSeries(1)
        s.coeffs[1] = TaggedPoly.term(mono(ep=3), 5)
        out = project_mode_sum(s, 3)
        assert out.coeffs[1] == TaggedPoly.scalar(5)
        # but a symbolically large lattice drops it
        out_inf = project_mode_sum(s)
        assert not out_inf.coeffs[1]

    def test_idempotent_and_linear(self):
        s = XSeries(3)
        s.coeffs[1] = TaggedPoly.term(mono(ep=1), 1) + TaggedPoly.term(MONO_ONE, 2)
        s.coeffs[2] = TaggedPoly.term(mono(eq=-4), 3)
        once = project_mode_sum(s, 8)
        twice = project_mode_sum(once, 8)
        assert once == twice
        t = XSeries(3)
        t.coeffs[1] = TaggedPoly.term(mono(er=2), 1)
        lhs = project_mode_sum(s + t, 8)
        rhs = project_mode_sum(s, 8) + project_mode_sum(t, 8)
        assert lhs == rhs


def scalar_series(order, *values):
    return XSeries.from_scalars(order, values)


class TestSeries:
    def test_sqrt_of_one_plus_two_x(self):
        s = scalar_series(2, 1, 2)
        out = series_sqrt(s)
        assert out.scalar_coefficients() == [1, 1, Fraction(-1, 2)]

    def test_sqrt_of_one(self):
        s = XSeries.one(5)
        assert series_sqrt(s) == s

    def test_sqrt_squares_back(self):
        s = scalar_series(6, 1, 3, -2, 5, 0, 1, -7)
        r = series_sqrt(s)
        assert r * r == s

    def test_log_of_one_minus_x(self):
        out = series_log(scalar_series(3, 1, -1))
        assert out.scalar_coefficients() == [0, -1, Fraction(-1, 2), Fraction(-1, 3)]

    def test_log_of_one(self):
        out = series_log(XSeries.one(4))
        assert all(not c for c in out.coeffs)

    def test_exp_log_round_trip(self):
        s = scalar_series(6, 1, 2, 0, -3, 1, 4, -1)
        assert series_exp(series_log(s)) == s

    def test_non_unit_constant_rejected(self):
        with pytest.raises(ValueError):
            series_sqrt(scalar_series(3, 2, 1))
        with pytest.raises(ValueError):
            series_log(scalar_series(3, 0, 1))

    def test_truncation_to_minimum_order(self):
        a = scalar_series(5, 1, 1, 1, 1, 1, 1)
        b = scalar_series(3, 1, 2, 3, 4)
        assert (a * b).order == 3
        assert (a + b).order == 3

    @given(st.lists(st.integers(-4, 4), min_size=1, max_size=6))
    @settings(max_examples=40)
    def test_sqrt_and_log_round_trips_random(self, tail):
        s = scalar_series(len(tail), 1, *tail)
        r = series_sqrt(s)
        assert r * r == s
        assert series_exp(series_log(s)) == s

    def test_tagged_round_trip(self):
        s = XSeries.one(4)
        s.coeffs[1] = TaggedPoly.term(mono(du=2, el=2, ep=-1), cyclo_pow(2))
        s.coeffs[2] = TaggedPoly.term(mono(dv=4), Fraction(3, 2))
        r = series_sqrt(s)
        assert r * r == s
