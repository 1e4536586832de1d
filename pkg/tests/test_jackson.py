import math

import pytest
from scipy.integrate import quad

from padiclab.jackson import (
    ConvergenceError,
    SeriesSpec,
    dq_expansion_coeffs,
    i_integral,
    jackson_integral,
    padic_correspondence_check,
    qq_series,
    shell_sum_oracle,
    small_q_polynomial,
    small_q_series,
)
from padiclab.qcalc import sym_bracket


def test_jackson_closed_forms():
    # integral of x^s over [0,1] equals (1-q)/(1-q^(s+1))
    for q in (0.1, 0.5, 0.9):
        for s in range(6):
            got = jackson_integral(lambda x: x**s, 1.0, q, tol=1e-15)
            assert got == pytest.approx((1 - q) / (1 - q ** (s + 1)), rel=1e-10)


def test_jackson_examples():
    assert jackson_integral(lambda x: 1.0, 1.0, 0.5) == pytest.approx(1.0, rel=1e-10)
    assert jackson_integral(lambda x: x, 1.0, 0.5) == pytest.approx(2 / 3, rel=1e-10)
    assert jackson_integral(lambda x: x * x, 1.0, 0.999) == pytest.approx(1 / 3, abs=1e-3)


def test_jackson_classical_limit_chain():
    # |J_q f - Riemann| decreases along q = 0.99, 0.999, 0.9999 for smooth f
    riemann = math.e - 1.0
    errs = [
        abs(jackson_integral(math.exp, 1.0, q, tol=1e-14) - riemann)
        for q in (0.99, 0.999, 0.9999)
    ]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-4


def test_jackson_linearity_and_scaling():
    f = lambda x: 2.3 * x + 0.4 * x**3
    a = jackson_integral(f, 1.0, 0.6, tol=1e-14)
    b = 2.3 * jackson_integral(lambda x: x, 1.0, 0.6, tol=1e-14)
    c = 0.4 * jackson_integral(lambda x: x**3, 1.0, 0.6, tol=1e-14)
    assert a == pytest.approx(b + c, rel=1e-12)


def test_all_integral_operations_linear_in_f():
    f, g = (lambda x: x * x), (lambda x: math.sin(x))
    combo = lambda x: 1.5 * f(x) - 0.25 * g(x)
    assert small_q_series(combo, 1.0, 0.2, 80) == pytest.approx(
        1.5 * small_q_series(f, 1.0, 0.2, 80) - 0.25 * small_q_series(g, 1.0, 0.2, 80),
        rel=1e-12,
    )
    spec = SeriesSpec(c=1.0, b_coef=0.1, q=0.8, m_max=6, n_max=8)
    assert qq_series(combo, spec) == pytest.approx(
        1.5 * qq_series(f, spec) - 0.25 * qq_series(g, spec), rel=1e-9
    )


def test_jackson_zero_node_does_not_truncate():
    # integrand vanishing at the first node must not stop the series
    got = jackson_integral(lambda x: 1.0 - x, 1.0, 0.5, tol=1e-14)
    assert got == pytest.approx(1.0 - 2 / 3, rel=1e-10)


def test_jackson_validates_inputs():
    with pytest.raises(ValueError):
        jackson_integral(lambda x: x, 1.0, 1.5)
    with pytest.raises(ValueError):
        jackson_integral(lambda x: x, -1.0, 0.5)


def test_small_q_series_examples():
    assert small_q_series(lambda x: 1.0, 1.0, 0.1, 50) == pytest.approx(1 / 0.9, rel=1e-12)
    assert small_q_series(lambda x: x, 1.0, 0.01, 20) == pytest.approx(1 / (1 - 1e-4), rel=1e-12)


def test_small_q_series_matches_jackson():
    # bare series * c(1-q) = canonical integral
    f = lambda x: x**2 + 0.5
    for q in (0.3, 0.05):
        bare = small_q_series(f, 2.0, q, 400)
        assert 2.0 * (1 - q) * bare == pytest.approx(
            jackson_integral(f, 2.0, q, tol=1e-15), rel=1e-12
        )


def test_i_integral_trivial_cases():
    spec = SeriesSpec(c=1.0, b_coef=0.0, q=0.5)
    assert i_integral(0, spec) == pytest.approx(1.0, rel=1e-9)
    assert i_integral(1, spec) == pytest.approx(-0.5, rel=1e-9)


def test_i_integral_small_q_value():
    # closed form of the m = 2, b = 0 case: integral (x-1)(x-q) dx = -1/6 + q/2;
    # O(1) magnitude as q -> 0 (the "about unity" claim is qualitative only)
    for q in (1e-2, 1e-4):
        spec = SeriesSpec(c=1.0, b_coef=0.0, q=q)
        assert i_integral(2, spec) == pytest.approx(-1 / 6 + q / 2, rel=1e-8)


def test_i_integral_with_weight_against_quadrature():
    spec = SeriesSpec(c=1.0, b_coef=0.3, q=0.7)
    oracle, _ = quad(
        lambda x: (x - 1) * (x - 0.7) * math.exp(0.3 * sym_bracket(x, 0.7)), 0, 1,
        epsabs=1e-13, epsrel=1e-12,
    )
    assert i_integral(2, spec) == pytest.approx(oracle, rel=1e-9)


def test_qq_series_constant():
    spec = SeriesSpec(c=0.8, b_coef=0.0, q=0.45, m_max=4, n_max=4)
    assert qq_series(lambda x: 1.0, spec) == pytest.approx(0.8, rel=1e-9)


def test_qq_series_cubic_matches_quadrature():
    f = lambda x: x**3 - 2 * x**2 + 0.75 * x + 0.3
    spec = SeriesSpec(c=1.0, b_coef=0.2, q=0.9, m_max=8, n_max=12, tol=1e-11)
    oracle, _ = quad(
        lambda x: f(x) * math.exp(0.2 * sym_bracket(x, 0.9)), 0, 1,
        epsabs=1e-14, epsrel=1e-13,
    )
    assert qq_series(f, spec) == pytest.approx(oracle, rel=1e-6)


def test_qq_series_classical_limit():
    # q -> 1: the weight exp(b [x]_q) -> exp(b x); with f = 1, b = -1 the value
    # is integral_0^1 exp(-x) dx = 1 - 1/e
    spec = SeriesSpec(c=1.0, b_coef=-1.0, q=1.0 - 1e-6, m_max=0, n_max=24, tol=1e-11)
    assert qq_series(lambda x: 1.0, spec) == pytest.approx(1 - 1 / math.e, abs=1e-4)


def test_qq_series_divergence_diagnostic():
    # deep truncations of a near-pole integrand blow up (analytically and
    # through coefficient amplification); growing m-blocks must be reported,
    # not silently returned
    f = lambda x: 1.0 / (1.02 - x)
    spec = SeriesSpec(c=1.0, b_coef=0.0, q=0.5, m_max=14, n_max=2, tol=1e-9)
    with pytest.raises(ConvergenceError):
        qq_series(f, spec)


def test_dq_expansion_first_order():
    q = 0.5
    co = dq_expansion_coeffs(1, q)
    denom = q - 1 / q
    assert co.coeffs == pytest.approx({1: 1 / denom, -1: -1 / denom})


def test_dq_expansion_coefficients_sum_to_zero():
    for n in range(1, 7):
        co = dq_expansion_coeffs(n, 0.7)
        assert sum(co.coeffs.values()) == pytest.approx(0.0, abs=1e-9)
        # constants are annihilated
        assert co.apply(lambda x: 3.7, 1.3) == pytest.approx(0.0, abs=1e-9)


def test_dq_expansion_monomial_ladder():
    # D_q^n x^s = [s][s-1]...[s-n+1] x^(s-n) with symmetric brackets
    q = 0.5
    co2 = dq_expansion_coeffs(2, q)
    want = sym_bracket(3, q) * sym_bracket(2, q)
    assert co2.apply(lambda x: x**3, 1.0) == pytest.approx(want, rel=1e-12)
    for n in range(1, 7):
        co = dq_expansion_coeffs(n, 0.8)
        for s in range(n, 9):
            ladder = 1.0
            for j in range(n):
                ladder *= sym_bracket(s - j, 0.8)
            got = co.apply(lambda x, _s=s: x**_s, 1.7)
            assert got == pytest.approx(ladder * 1.7 ** (s - n), rel=1e-9)


def test_padic_correspondence():
    assert padic_correspondence_check(0, 3) < 1e-12
    assert jackson_integral(lambda x: 1.0, 1.0, 1 / 3, tol=1e-16) == pytest.approx(1.0, rel=1e-12)
    assert shell_sum_oracle(1, 3) == pytest.approx(0.75, rel=1e-12)
    assert shell_sum_oracle(2, 5) == pytest.approx(0.8 / (1 - 5.0**-3), rel=1e-12)
    for p in (2, 3, 5):
        for s in range(3):
            assert padic_correspondence_check(s, p) < 1e-12


def test_shell_sum_requires_prime():
    with pytest.raises(ValueError):
        shell_sum_oracle(1, 4)


def test_small_q_polynomial_table():
    # reference constants only; spot-check the recorded shapes
    assert small_q_polynomial(1, 0.1) == pytest.approx(-0.1)
    assert small_q_polynomial(3, 0.1) == pytest.approx(1.0)
    assert small_q_polynomial(5, 0.1) == pytest.approx(-1e5)


def test_series_spec_validation():
    with pytest.raises(ValueError):
        SeriesSpec(q=1.2)
    with pytest.raises(ValueError):
        SeriesSpec(c=-1.0)
    with pytest.raises(ValueError):
        SeriesSpec(tol=0.0)
    with pytest.raises(ValueError):
        SeriesSpec(m_max=-1)
