from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.special import eval_jacobi

from grassmann_sph.jacobi import (JacobiParams, jacobi_derivative, jacobi_eval, jacobi_table,
                                  normalized_jacobi, normalized_jacobi_derivative,
                                  normalized_taylor_table)


def explicit_sum(n, a, b, x):
    """Closed-form finite sum, independent of the recurrence."""
    x = Fraction(x)
    return sum(comb(n + a, n - s) * comb(n + b, s) * ((x - 1) / 2) ** s * ((x + 1) / 2) ** (n - s)
               for s in range(n + 1))


def richardson_derivative(f, x, h=1e-4):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


class TestJacobiEval:
    def test_constant(self):
        assert jacobi_eval(JacobiParams(0, 1, 0), 0.3) == 1

    def test_value_at_one(self):
        assert jacobi_eval(JacobiParams(2, 1, 0), 1) == 3

    def test_value_at_minus_one(self):
        assert jacobi_eval(JacobiParams(3, 0, 2), -1) == -10

    def test_exact_returns_fraction(self):
        value = jacobi_eval(JacobiParams(5, 2, 1), Fraction(1, 3))
        assert isinstance(value, Fraction)
        assert value == explicit_sum(5, 2, 1, Fraction(1, 3))

    @pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (3, 2), (5, 5)])
    def test_against_scipy(self, a, b):
        x = np.linspace(-1, 1, 41)
        table = jacobi_table(30, a, b, x)
        for n in range(31):
            assert_allclose(table[n], eval_jacobi(n, a, b, x), rtol=1e-11, atol=1e-11)

    def test_exact_endpoint_identity_up_to_50(self):
        for a in range(0, 6):
            for b in range(0, 4):
                for n in range(51):
                    assert jacobi_eval(JacobiParams(n, a, b), 1) == comb(n + a, n)

    def test_float_outside_interval_rejected(self):
        with pytest.raises(ValueError):
            jacobi_eval(JacobiParams(3, 1, 0), 1.5)
        # exact mode is fine outside [-1, 1]
        assert jacobi_eval(JacobiParams(3, 1, 0), 2) == explicit_sum(3, 1, 0, 2)

    def test_degree_limit(self):
        with pytest.raises(ValueError, match="degree limit"):
            jacobi_eval(JacobiParams(10**5 + 1, 0, 0), 0.1)
        with pytest.raises(ValueError, match="degree limit"):
            jacobi_eval(JacobiParams(11, 0, 0), 0.1, max_degree=10)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            JacobiParams(-1, 0, 0)
        with pytest.raises(ValueError):
            JacobiParams(2, -1, 0)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(0, 50), a=st.integers(0, 6),
           num=st.integers(-97, 97))
    def test_float_matches_exact(self, n, a, num):
        x = Fraction(num, 97)
        exact = jacobi_eval(JacobiParams(n, a, 0), x)
        approx = jacobi_eval(JacobiParams(n, a, 0), float(x))
        assert abs(approx - float(exact)) <= 1e-10 * max(abs(float(exact)), 1e-3)


class TestJacobiDerivative:
    def test_linear(self):
        assert jacobi_derivative(JacobiParams(1, 0, 0), 1, 0.7) == pytest.approx(1.0)

    def test_constant(self):
        assert jacobi_derivative(JacobiParams(0, 2, 0), 1, 0.5) == 0

    def test_second_derivative_vs_finite_differences(self):
        params = JacobiParams(4, 1, 0)
        first = lambda x: jacobi_derivative(params, 1, x)
        expected = richardson_derivative(first, 0.25)
        assert jacobi_derivative(params, 2, 0.25) == pytest.approx(expected, rel=1e-6)

    def test_first_derivative_grid(self):
        xs = np.linspace(-0.95, 0.95, 20)
        for n, a, b in [(5, 0, 0), (9, 2, 1), (14, 3, 0)]:
            params = JacobiParams(n, a, b)
            f = lambda x: jacobi_eval(params, x)
            for x in xs:
                got = jacobi_derivative(params, 1, x)
                assert got == pytest.approx(richardson_derivative(f, x), rel=1e-6, abs=1e-9)

    def test_exact_derivative_matches_polynomial(self):
        # derivative of the explicit sum, via exact central difference of a polynomial:
        # for a polynomial of degree n, compare against the symbolic derivative
        import sympy as sp
        x = sp.symbols("x")
        poly = sp.jacobi(7, 2, 1, x)
        for order in range(0, 9):
            expected = sp.diff(poly, x, order).subs(x, sp.Rational(1, 3))
            got = jacobi_derivative(JacobiParams(7, 2, 1), order, Fraction(1, 3))
            assert got == Fraction(int(expected.p), int(expected.q))


class TestNormalized:
    def test_legendre(self):
        assert normalized_jacobi(0, 2, Fraction(0)) == Fraction(-1, 2)
        assert normalized_jacobi(0, 2, 0.0) == pytest.approx(-0.5)

    def test_one_at_one(self):
        assert normalized_jacobi(3, 7, 1) == 1

    def test_minus_one(self):
        assert normalized_jacobi(1, 5, -1) == Fraction(-1, 6)

    def test_derivative_examples(self):
        assert normalized_jacobi_derivative(0, 1, 1, 0.123) == pytest.approx(1.0)
        assert normalized_jacobi_derivative(0, 0, 1, 0.2) == 0

    def test_two_derivative_paths_agree(self):
        # repeated jacobi_derivative / P_6^(2,0)(1) vs the normalized formula
        params = JacobiParams(6, 2, 0)
        direct = jacobi_derivative(params, 3, 0.1) / comb(8, 6)
        stepwise = jacobi_derivative(JacobiParams(5, 3, 1), 2, 0.1) * (6 + 2 + 0 + 1) / 2 / comb(8, 6)
        got = normalized_jacobi_derivative(2, 6, 3, 0.1)
        assert got == pytest.approx(direct, rel=1e-10)
        assert got == pytest.approx(stepwise, rel=1e-10)

    def test_bounded_decay_interior(self):
        # |P~_n(x)| (n+1)^{gap+1/2} stays bounded for fixed interior x; shells are
        # disjoint blocks of 10 degrees, slope fitted over the tail half n in [100, 200]
        ns = np.arange(201)
        for gap in (0, 1, 2):
            norm = np.array([float(comb(n + gap, n)) for n in ns])
            for x in (-0.9, -0.6, 0.1, 0.7, 0.9):
                table = jacobi_table(200, gap, 0, np.array(x))
                scaled = np.abs(table / norm) * (ns + 1.0) ** (gap + 0.5)
                shells = scaled[1:].reshape(20, 10).max(axis=1)[10:]
                slope = np.polyfit(np.log(np.arange(11, 21) * 10.0), np.log(shells), 1)[0]
                assert slope <= 0.05, (gap, x, slope)

    def test_taylor_table(self):
        x = np.array([0.3, -0.8])
        table = normalized_taylor_table(1, 12, 3, x)
        for n in range(13):
            for i in range(3):
                for k, xv in enumerate(x):
                    expected = normalized_jacobi_derivative(1, n, i, float(xv)) / [1, 1, 2][i]
                    assert table[n, i, k] == pytest.approx(expected, rel=1e-12, abs=1e-14)
