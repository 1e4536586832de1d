import math

import mpmath
import numpy as np
import pytest

from padiclab.qcalc import (
    FieldInvariants,
    QParams,
    check_algebra_relations,
    d_q,
    d_rq,
    f4,
    k_special,
    q_factorial,
    q_number,
    q_pochhammer,
    sym_bracket,
)


def test_q_number_examples():
    for q in (0.3, 0.9, 2.0, 5.0):
        assert q_number(1, QParams(q=q)) == pytest.approx(1.0, abs=1e-14)
    assert q_number(2, QParams(q=2.0)) == pytest.approx(2.5)      # q + 1/q
    assert q_number(3, QParams(q=2.0)) == pytest.approx(5.25)     # q^2 + 1 + q^-2


def test_q_number_two_parameter():
    # [X]_rq = (q^X - r^-X)/(q - r^-1), direct substitution
    qp = QParams(q=2.0, r=3.0)
    assert q_number(1, qp) == pytest.approx(1.0)
    assert q_number(2, qp) == pytest.approx((4 - 1 / 9) / (2 - 1 / 3))


def test_q_params_validation():
    with pytest.raises(ValueError):
        QParams(q=1.0)
    with pytest.raises(ValueError):
        QParams(q=0.5, r=2.0)  # q = 1/r degenerate
    with pytest.raises(ValueError):
        QParams(q=-1.0)


def test_q_factorial():
    assert q_factorial(0, 0.5) == 1.0
    assert q_factorial(3, 1.0) == 6.0
    assert q_factorial(2, 0.5) == pytest.approx(2.5)  # [2]_0.5 = 0.5 + 2
    with pytest.raises(ValueError):
        q_factorial(-1, 0.5)


def test_q_factorial_small_q_asymptotics():
    # [n]_q! * q^(n(n-1)/2) -> 1 as q -> 0
    q = 1e-3
    for n in range(1, 7):
        assert q_factorial(n, q) * q ** (n * (n - 1) / 2) == pytest.approx(1.0, rel=0.01)


def test_q_pochhammer():
    assert q_pochhammer(5.0, 1.0, 0.5, 0) == 1.0
    assert q_pochhammer(2.0, 1.0, 0.7, 1) == pytest.approx(1.0)
    assert q_pochhammer(2.0, 1.0, 0.5, 2) == pytest.approx(1.5)  # (2-1)(2-0.5)


def test_d_q_monomial_ladder():
    # D_q x^n = [n]_q x^(n-1), exact monomial identity
    for q in (0.5, 2.0, 0.9):
        for n in range(1, 13):
            for x in (0.7, 1.0, 1.9):
                got = d_q(lambda t: t**n, x, q)
                want = sym_bracket(n, q) * x ** (n - 1)
                assert got == pytest.approx(want, rel=1e-12)


def test_d_q_constant_and_pole():
    assert d_q(lambda t: 4.25, 1.3, 0.5) == 0.0
    with pytest.raises(ValueError):
        d_q(lambda t: t, 0.0, 0.5)


def test_d_q_classical_limit_sin():
    got = d_q(math.sin, 1.0, 1.0 + 1e-6)
    assert got == pytest.approx(math.cos(1.0), abs=1e-6)


def test_d_q_convergence_order_two():
    # remainder is even in ln q, so the error is O((q-1)^2)
    f, fprime = math.exp, math.exp(1.0)
    errs = [abs(d_q(f, 1.0, 1.0 + eps) - fprime) for eps in (1e-2, 1e-3)]
    order = math.log(errs[0] / errs[1]) / math.log(10.0)
    assert order >= 1.9


def test_d_rq_examples():
    assert d_rq(lambda t: t * t, 1.0, 3.0, 2.0) == pytest.approx(5.0)  # r + q
    assert d_rq(lambda t: t, 0.37, 1.7, 0.4) == pytest.approx(1.0)
    f = lambda y: math.sqrt(y) * math.sinh(math.sqrt(y))
    assert d_rq(f, 1.0, 4.0, 1.0) == pytest.approx(f4(2.0, 1.0), rel=1e-12)
    with pytest.raises(ValueError):
        d_rq(lambda t: t, 1.0, 2.0, 2.0)


def test_f4_values():
    assert f4(1.0, 0.0) == pytest.approx(math.sinh(1.0), abs=1e-10)
    assert f4(1.0, 1.0) == pytest.approx(math.e / 2, abs=1e-10)
    assert f4(2.0, 1.0) == pytest.approx((2 * math.sinh(2) - math.sinh(1)) / 3, rel=1e-12)
    assert f4(0.0, 0.0) == pytest.approx(1.0, rel=1e-12)


def test_f4_equals_d_rq_randomly():
    rng = np.random.default_rng(11)
    f = lambda y: math.sqrt(y) * math.sinh(math.sqrt(y))
    for _ in range(100):
        e, h = rng.uniform(0.05, 3.0, size=2)
        if abs(e - h) < 1e-3:
            h += 0.1
        assert f4(e, h) == pytest.approx(d_rq(f, 1.0, e * e, h * h), rel=1e-10)


def test_f4_symmetry_and_diagonal_branch():
    assert f4(1.7, 0.4) == f4(0.4, 1.7)
    # straddle the series/direct switch: values must agree across it
    e = 1.3
    for dh in (0.0, 1e-6, 1e-5, 1e-3):
        direct = mpmath.mpf(0)
        with mpmath.workdps(50):
            ee, hh = mpmath.mpf(e), mpmath.mpf(e) + mpmath.mpf(dh)
            if ee == hh:
                direct = (mpmath.sinh(hh) + hh * mpmath.cosh(hh)) / (2 * hh)
            else:
                direct = (ee * mpmath.sinh(ee) - hh * mpmath.sinh(hh)) / (ee**2 - hh**2)
        assert f4(e, e + dh) == pytest.approx(float(direct), rel=1e-11)


def _k_oracle(E, h, alpha=1.0):
    # high-precision evaluation of the defining formula, limit via tiny offset
    with mpmath.workdps(60):
        ee, hh, aa = mpmath.mpf(E), mpmath.mpf(h), mpmath.mpf(alpha)
        if ee == hh:
            ee += mpmath.mpf(10) ** -30
        val = (mpmath.cosh(aa * ee) / ee**2 - mpmath.cosh(aa * hh) / hh**2) / (ee**2 - hh**2)
        return float(val)


def test_k_special_value():
    got = k_special(FieldInvariants(E=2.0, h=1.0))
    # the defining formula is the oracle; the 5-digit figure is display-rounded
    assert got == pytest.approx((math.cosh(2) / 4 - math.cosh(1)) / 3, rel=1e-12)
    assert got == pytest.approx(-0.20084, abs=1e-5)


def test_k_special_symmetry():
    a = k_special(FieldInvariants(E=2.0, h=0.7, alpha=1.3))
    b = k_special(FieldInvariants(E=0.7, h=2.0, alpha=1.3))
    assert a == pytest.approx(b, rel=1e-12)


def test_k_special_diagonal_limit():
    for e in (0.5, 1.0, 2.2):
        got = k_special(FieldInvariants(E=e, h=e))
        assert math.isfinite(got)
        assert got == pytest.approx(_k_oracle(e, e), rel=1e-9)
        # continuity across the branch switch
        got_off = k_special(FieldInvariants(E=e, h=e * (1 + 5e-4)))
        assert got_off == pytest.approx(_k_oracle(e, e * (1 + 5e-4)), rel=1e-9)


def test_k_special_pole_rejected():
    with pytest.raises(ValueError):
        k_special(FieldInvariants(E=0.0, h=1.0))


def test_k_special_reshapes_as_d_rq():
    # K(sqrt(alpha))/alpha^2 = D_{E^2,h^2} [ch(sqrt(y))/y] (alpha)
    rng = np.random.default_rng(3)
    g = lambda y: math.cosh(math.sqrt(y)) / y
    for _ in range(50):
        e, h = rng.uniform(0.3, 2.5, size=2)
        if abs(e * e - h * h) < 1e-2:
            continue
        alpha = rng.uniform(0.05, 2.0)
        lhs = d_rq(g, alpha, e * e, h * h)
        rhs = k_special(FieldInvariants(E=e, h=h, alpha=math.sqrt(alpha))) / alpha**2
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_algebra_relations_one_parameter():
    rep = check_algebra_relations(3, QParams(q=0.5))
    assert rep.ladder_plus_residual < 1e-12
    assert rep.ladder_minus_residual < 1e-12
    assert rep.commutator_residual < 1e-12
    rep = check_algebra_relations(10, QParams(q=0.9))
    assert max(rep.ladder_plus_residual, rep.ladder_minus_residual) < 1e-10
    assert rep.commutator_residual < 1e-10


def test_algebra_relations_classical_limit():
    # q -> 1: [S+, S-] x^n -> 1 * x^n
    rep = check_algebra_relations(5, QParams(q=1.0 + 1e-6))
    size = 8
    # the commutator eigenvalue [n+1]_q - [n]_q must sit within 1e-6 of 1
    for n in range(6):
        ev = sym_bracket(n + 1, 1.0 + 1e-6) - (sym_bracket(n, 1.0 + 1e-6) if n else 0.0)
        assert ev == pytest.approx(1.0, abs=1e-6)
    assert rep.commutator_residual < 1e-12  # realisation matches its own eigenvalues exactly


def test_algebra_relations_two_parameter():
    rep = check_algebra_relations(6, QParams(q=0.7, r=1.3))
    assert rep.ladder_plus_residual < 1e-12
    assert rep.ladder_minus_residual < 1e-12
    assert rep.commutator_residual < 1e-12
    assert rep.paper_rhs_deviation > 0.0  # printed RHS differs; reported, not asserted


def test_algebra_relations_rejects_degree_zero():
    with pytest.raises(ValueError):
        check_algebra_relations(0, QParams(q=0.5))
