import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacspec import specfun


def explicit_sum_laguerre(n, s, x):
    """Exact rational evaluation of the defining finite sum (s >= 0)."""
    xq = Fraction(x)
    total = Fraction(0)
    for i in range(n + 1):
        term = (
            Fraction(math.comb(n, i)) * xq**i
            * Fraction(math.factorial(n + s), math.factorial(i + s))
        )
        total += -term if i % 2 else term
    return total / math.factorial(n)


def series_bessel_mp(s, x, dps=60):
    """Ascending-series oracle in extended precision."""
    with mp.workdps(dps):
        acc = mp.mpf(0)
        term = (mp.mpf(x) / 2) ** s / mp.factorial(s)
        k = 0
        q = -(mp.mpf(x) ** 2) / 4
        while True:
            acc += term
            k += 1
            term *= q / (k * (s + k))
            if abs(term) < mp.mpf(10) ** (-dps) * (abs(acc) + 1):
                break
        return float(acc)


class TestLogGamma:
    def test_at_one(self):
        assert specfun.log_gamma(1.0) == pytest.approx(0.0, abs=1e-12)

    def test_factorial(self):
        assert specfun.log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-12)

    def test_half(self):
        assert specfun.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.log_gamma(0.0)
        with pytest.raises(ValueError):
            specfun.log_gamma(-3.0)

    @given(st.floats(min_value=1e-6, max_value=1e6))
    def test_against_stdlib(self, z):
        ref = math.lgamma(z)
        assert abs(specfun.log_gamma(z) - ref) <= 1e-12 * max(1.0, abs(ref))

    def test_vectorized_matches_scalar(self):
        zs = np.array([0.25, 1.0, 3.5, 40.0, 1212.0])
        vec = specfun._log_gamma_arr(zs)
        for z, v in zip(zs, vec):
            assert v == pytest.approx(specfun.log_gamma(float(z)), rel=1e-14)


class TestLaguerrePolynomial:
    def test_degree_zero_is_one(self):
        assert specfun.laguerre_polynomial(0, 3, 7.2) == 1.0

    def test_value_at_origin(self):
        # only the constant term of the finite sum survives at x = 0
        for n, s in [(3, 0), (5, 2), (2, 7), (10, 1)]:
            expect = math.factorial(n + s) / (math.factorial(n) * math.factorial(s))
            assert specfun.laguerre_polynomial(n, s, 0.0) == pytest.approx(expect, rel=1e-13)

    def test_explicit_sum_value(self):
        # frozen from the exact rational sum: L_2(1) = 1 - 2 + 1/2
        assert explicit_sum_laguerre(2, 0, 1.0) == Fraction(-1, 2)
        assert specfun.laguerre_polynomial(2, 0, 1.0) == pytest.approx(-0.5, rel=1e-14)

    @given(
        st.integers(min_value=0, max_value=25),
        st.integers(min_value=0, max_value=6),
        st.floats(min_value=-30.0, max_value=30.0),
    )
    def test_recurrence_matches_explicit_sum(self, n, s, x):
        exact = float(explicit_sum_laguerre(n, s, x))
        got = specfun.laguerre_polynomial(n, s, x)
        assert abs(got - exact) <= 1e-11 * max(1.0, abs(exact))

    def test_negative_order_identity(self):
        # L_n^(-t)(x) = (-x)^t (n-t)!/n! L_{n-t}^(t)(x)
        for n, t, x in [(5, 2, 1.7), (8, 3, -2.5), (4, 4, 0.9)]:
            lhs = specfun.laguerre_polynomial(n, -t, x)
            rhs = (
                (-x) ** t
                * math.factorial(n - t) / math.factorial(n)
                * specfun.laguerre_polynomial(n - t, t, x)
            )
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-15)

    def test_degenerate_returns_zero(self):
        assert specfun.laguerre_polynomial(2, -5, 1.3) == 0.0


class TestLaguerreFunction:
    def test_ground_state(self):
        for x in (0.3, 1.0, 7.5):
            assert specfun.laguerre_function(0, 0, x) == pytest.approx(
                math.exp(-x / 2), rel=1e-14
            )

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.laguerre_function(2, 1, 0.0)
        with pytest.raises(ValueError):
            specfun.laguerre_function(2, 1, -4.0)

    def test_zero_when_degree_plus_order_negative(self):
        assert specfun.laguerre_function(1, -4, 2.2) == 0.0

    def test_deep_underflow_flushes_to_zero(self):
        # documented: seeds below double range make the whole column 0
        assert specfun.laguerre_function(0, 400, 1.0) == 0.0
        assert specfun.laguerre_function(3, 400, 1.0) == 0.0

    @given(
        st.integers(min_value=0, max_value=60),
        st.integers(min_value=0, max_value=10),
        st.floats(min_value=1e-3, max_value=50.0),
    )
    def test_negative_order_symmetry_is_bit_exact(self, n, s, x):
        # same code path up to a sign, so equality is exact
        assert abs(specfun.laguerre_function(n, s, x)) == abs(
            specfun.laguerre_function(n + s, -s, x)
        )

    @settings(max_examples=25)
    @given(
        st.integers(min_value=0, max_value=200),
        st.integers(min_value=0, max_value=10),
        st.floats(min_value=1e-2, max_value=50.0),
    )
    def test_against_extended_precision(self, n, s, x):
        with mp.workdps(40):
            ref = float(
                mp.sqrt(mp.factorial(n) / mp.factorial(n + s))
                * mp.e ** (-mp.mpf(x) / 2)
                * mp.mpf(x) ** (mp.mpf(s) / 2)
                * mp.laguerre(n, s, x)
            )
        got = specfun.laguerre_function(n, s, x)
        assert abs(got - ref) <= 1e-9 * max(abs(ref), 1e-6)

    @given(
        st.integers(min_value=0, max_value=30),
        st.integers(min_value=0, max_value=10),
        st.floats(min_value=1e-2, max_value=50.0),
    )
    def test_matches_normalized_polynomial_route(self, n, s, x):
        via_poly = (
            math.exp(
                0.5 * (specfun.log_gamma(n + 1.0) - specfun.log_gamma(n + s + 1.0))
                - 0.5 * x
            )
            * x ** (s / 2.0)
            * specfun.laguerre_polynomial(n, s, x)
        )
        got = specfun.laguerre_function(n, s, x)
        assert got == pytest.approx(via_poly, rel=1e-9, abs=1e-280)

    def test_large_degree_anchor(self):
        # the bound checkers lean on the recurrence out to 1e5
        for n, s in [(10**4, 0), (10**4, 1), (10**5, 0)]:
            with mp.workdps(40):
                ref = float(
                    mp.sqrt(mp.factorial(n) / mp.factorial(n + s))
                    * mp.e ** mp.mpf(-0.5)
                    * mp.laguerre(n, s, 1.0)
                )
            got = specfun.laguerre_function(n, s, 1.0)
            assert got == pytest.approx(ref, rel=1e-10)

    def test_table_matches_scalar(self):
        x = 1.9
        w = specfun.laguerre_function_table(40, 12, x)
        for n in (0, 1, 7, 40):
            for s in (0, 3, 12):
                assert w[n, s] == pytest.approx(
                    specfun.laguerre_function(n, s, x), rel=1e-13, abs=1e-300
                )

    def test_table_domain(self):
        with pytest.raises(ValueError):
            specfun.laguerre_function_table(4, 4, 0.0)


class TestBesselJ:
    def test_at_origin(self):
        assert specfun.bessel_j(0, 0.0) == 1.0
        for s in (1, 2, 17):
            assert specfun.bessel_j(s, 0.0) == 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            specfun.bessel_j(0, -1.0)
        with pytest.raises(ValueError):
            specfun.bessel_j(-1, 1.0)

    def test_frozen_series_value(self):
        # series_bessel_mp(3, 8.5) computed once at 60 digits
        assert specfun.bessel_j(3, 8.5) == pytest.approx(
            -0.2626162038576848, rel=1e-10
        )
        assert series_bessel_mp(3, 8.5) == pytest.approx(-0.2626162038576848, rel=1e-13)

    @given(
        st.integers(min_value=0, max_value=12),
        st.floats(min_value=1e-4, max_value=25.0),
    )
    def test_small_argument_against_series_oracle(self, s, x):
        ref = series_bessel_mp(s, x, dps=60)
        assert abs(specfun.bessel_j(s, x) - ref) <= 1e-10 * max(abs(ref), 1e-3)

    @settings(max_examples=30)
    @given(
        st.integers(min_value=0, max_value=50),
        st.floats(min_value=1e-4, max_value=1000.0),
    )
    def test_against_mpmath(self, s, x):
        with mp.workdps(30):
            ref = float(mp.besselj(s, x))
        got = specfun.bessel_j(s, x)
        assert abs(got - ref) <= 1e-10 * max(abs(ref), 1e-4)

    def test_bounded_by_one(self):
        xs = np.linspace(0.0, 1000.0, 211)
        for s in (0, 1, 5, 17, 33, 50):
            for x in xs:
                assert abs(specfun.bessel_j(s, float(x))) <= 1.0 + 1e-12


class TestGaussLaguerre:
    def test_one_point_rule(self):
        rule = specfun.gauss_laguerre(1, 0.0)
        assert rule.nodes[0] == pytest.approx(1.0, abs=1e-12)
        assert rule.weights[0] == pytest.approx(1.0, rel=1e-12)

    def test_invalid(self):
        with pytest.raises(ValueError):
            specfun.gauss_laguerre(0)
        with pytest.raises(ValueError):
            specfun.gauss_laguerre(4, -0.5)

    @pytest.mark.parametrize("order", [2, 8, 20, 40])
    @pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0, 5.0])
    def test_moments_exact(self, order, alpha):
        # moment k of the weight is Gamma(alpha + k + 1)
        rule = specfun.gauss_laguerre(order, alpha)
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all(rule.weights > 0)
        for k in range(0, 2 * order, max(1, order // 3)):
            moment = float(np.dot(rule.weights, rule.nodes**k))
            expect = math.exp(specfun.log_gamma(alpha + k + 1.0))
            assert moment == pytest.approx(expect, rel=1e-12)

    def test_first_moment(self):
        for alpha in (0.0, 1.5):
            rule = specfun.gauss_laguerre(12, alpha)
            expect = math.exp(specfun.log_gamma(alpha + 2.0))
            assert float(rule.weights @ rule.nodes) == pytest.approx(expect, rel=1e-12)

    @pytest.mark.parametrize("s", [0, 1, 2, 3, 4, 5])
    def test_orthonormality_of_functions(self, s):
        # the weight-stripped product of two order-s functions is a
        # polynomial, so an order-40 rule integrates it exactly; check
        # the full Gram matrix for degrees up to 20
        rule = specfun.gauss_laguerre(40, float(s))
        f = np.empty((21, rule.order))
        for i, x in enumerate(rule.nodes):
            f[:, i] = specfun.laguerre_function_table(20, s, float(x))[:, s]
        strip = rule.weights * np.exp(rule.nodes) * rule.nodes ** (-float(s))
        gram = (f * strip) @ f.T
        assert np.abs(gram - np.eye(21)).max() < 1e-9
