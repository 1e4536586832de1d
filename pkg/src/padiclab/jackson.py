"""Jackson integrals, the deformed exponential double series, and limit regimes.

``jackson_integral`` is the canonical q-integral over [0, c],

    integral_q f = c (1 - q) * sum_{k >= 0} f(c q^k) q^k,

which tends to the Riemann integral as q -> 1 and, at q = 1/p, reproduces the
shell decomposition of the p-adic unit-ball integral.  ``small_q_series``
exposes the bare series sum f(c q^k) q^k without the prefactor, which is the
form the small-q limit is usually quoted in.

``qq_series`` evaluates integral_0^c f(x) exp(b [x]_q) dx through the double
expansion in q-Taylor order m and exponential order n.  The weight uses the
symmetric bracket [x]_q; the expansion layer uses the one-sided Jackson
derivative and factorial ((1 - q^k)/(1 - q)), because that is the convention
under which the q-Taylor theorem holds exactly on polynomials.  With the
symmetric ladder the degree-2 expansion already misses the integrand by
c (1/q - 1) (x - c), so the two layers must not be mixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from scipy.integrate import quad

from .padic import Prime, is_prime
from .qcalc import q_pochhammer, sym_bracket

_MAX_SERIES_TERMS = 10**6


class ConvergenceError(RuntimeError):
    """A series or quadrature failed to reach its tolerance."""


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of the deformed exponential integral over [0, c]."""

    c: float = 1.0
    b_coef: float = 0.0
    q: float = 0.5
    m_max: int = 8
    n_max: int = 12
    tol: float = 1e-9

    def __post_init__(self) -> None:
        if not 0.0 < self.q < 1.0:
            raise ValueError("q must lie in (0, 1)")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.m_max < 0 or self.n_max < 0:
            raise ValueError("truncation orders must be >= 0")


def jackson_integral(
    f: Callable[[float], float], c: float, q: float, tol: float = 1e-12
) -> float:
    """Canonical Jackson integral c(1-q) sum f(c q^k) q^k over [0, c]."""
    if not 0.0 < q < 1.0:
        raise ValueError("jackson_integral needs 0 < q < 1")
    if c <= 0:
        raise ValueError("c must be positive")
    total = 0.0
    node, weight = c, 1.0
    small_run = 0
    for _ in range(_MAX_SERIES_TERMS):
        term = f(node) * weight
        total += term
        # two consecutive small terms, so an isolated zero of f cannot stop the sum
        small_run = small_run + 1 if abs(term) < tol * (abs(total) + 1.0) else 0
        if small_run >= 2:
            return c * (1.0 - q) * total
        node *= q
        weight *= q
    raise ConvergenceError("Jackson series did not converge within 1e6 terms")


def small_q_series(
    f: Callable[[float], float], c: float, q: float, terms: int
) -> float:
    """Bare series sum_{k<terms} f(c q^k) q^k (no c(1-q) prefactor)."""
    if not 0.0 < q < 1.0:
        raise ValueError("small_q_series needs 0 < q < 1")
    total = 0.0
    node, weight = c, 1.0
    for _ in range(terms):
        total += f(node) * weight
        node *= q
        weight *= q
    return total


def _quad_checked(integrand: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    out = quad(integrand, lo, hi, epsabs=1e-14, epsrel=tol, limit=200, full_output=1)
    if len(out) > 3:
        raise ConvergenceError(f"quadrature failed: {out[3]}")
    return out[0]


def i_integral(m: int, spec: SeriesSpec) -> float:
    """Real-axis integral of (x - c)_q^m exp(b [x]_q) over [0, c]."""
    if m < 0:
        raise ValueError("Pochhammer order must be >= 0")
    c, q, b = spec.c, spec.q, spec.b_coef
    return _quad_checked(
        lambda x: q_pochhammer(x, c, q, m) * math.exp(b * sym_bracket(x, q)),
        0.0,
        c,
        spec.tol,
    )


def _forward_dq_table(f: Callable[[float], float], c: float, q: float, m_max: int) -> list[float]:
    """One-sided q-derivatives D^m f(c) for m = 0..m_max.

    D f(x) = (f(x) - f(qx)) / ((1-q) x); the shift coefficients follow the
    recurrence c[m+1, k] = (c[m, k] - q^-m c[m, k-1]) / (1 - q).
    """
    values = [f(c * q**k) for k in range(m_max + 1)]
    coeffs = {0: 1.0}
    out = [values[0]]
    for m in range(m_max):
        nxt: dict[int, float] = {}
        for k in range(m + 2):
            v = (coeffs.get(k, 0.0) - q ** (-m) * coeffs.get(k - 1, 0.0)) / (1.0 - q)
            if v != 0.0:
                nxt[k] = v
        coeffs = nxt
        out.append(sum(v * values[k] for k, v in coeffs.items()) / c ** (m + 1))
    return out


def _forward_q_factorial(n: int, q: float) -> float:
    out = 1.0
    for k in range(1, n + 1):
        out *= (1.0 - q**k) / (1.0 - q)
    return out


def qq_series(f: Callable[[float], float], spec: SeriesSpec) -> float:
    """Double series for integral_0^c f(x) exp(b [x]_q) dx, truncated at (m_max, n_max).

    Raises ConvergenceError when the m-blocks diverge instead of silently
    returning a truncation.
    """
    c, q, b = spec.c, spec.q, spec.b_coef
    derivs = _forward_dq_table(f, c, q, spec.m_max)

    increments = []
    total = 0.0
    for m in range(spec.m_max + 1):
        block = 0.0
        bn = 1.0
        for n in range(spec.n_max + 1):
            inner = _quad_checked(
                lambda x, _m=m, _n=n: q_pochhammer(x, c, q, _m) * sym_bracket(x, q) ** _n,
                0.0,
                c,
                spec.tol,
            )
            block += bn / math.factorial(n) * inner
            bn *= b
        term = derivs[m] / _forward_q_factorial(m, q) * block
        total += term
        increments.append(abs(term))

    tail = [x for x in increments[1:] if x > 0.0]
    if len(tail) >= 3 and tail[-1] > tail[-2] > tail[-3] and tail[-1] > spec.tol * (abs(total) + 1.0):
        raise ConvergenceError(
            f"qq_series m-blocks are growing ({tail[-3]:.3e} -> {tail[-1]:.3e}); "
            "raise m_max or reconsider f"
        )
    return total


@dataclass(frozen=True)
class DqExpansionCoeffs:
    """Shift representation D_q^n f(x) = x^-n sum_k d_k f(q^k x) (symmetric ladder).

    The 1/x^n prefactor is tracked by ``apply`` rather than folded into the
    coefficients.  Constants are annihilated for n >= 1, so the coefficients
    sum to zero.
    """

    order: int
    q: float
    coeffs: Mapping[int, float]

    def apply(self, f: Callable[[float], float], x: float) -> float:
        if x == 0:
            raise ValueError("shift representation is singular at x = 0")
        return sum(v * f(self.q**k * x) for k, v in self.coeffs.items()) / x**self.order


def dq_expansion_coeffs(n: int, q: float) -> DqExpansionCoeffs:
    """Coefficients d_k^n(q) of the symmetric D_q^n as shifts f -> f(q^k x)."""
    if n < 1:
        raise ValueError("expansion order must be >= 1")
    if q <= 0 or q == 1.0:
        raise ValueError("needs q > 0, q != 1")
    d: dict[int, float] = {0: 1.0}
    for m in range(n):
        nxt: dict[int, float] = {}
        for k in range(-(m + 1), m + 2):
            v = (q ** (-m) * d.get(k - 1, 0.0) - q**m * d.get(k + 1, 0.0)) / (q - 1.0 / q)
            if v != 0.0:
                nxt[k] = v
        d = nxt
    return DqExpansionCoeffs(order=n, q=q, coeffs=dict(sorted(d.items())))


# Asymptotic small-q polynomial table quoted alongside the double series, as
# (sign, exponent) pairs meaning sign * q**exponent.  Their defining relation
# to the shift coefficients d_k^n is not stated in the source material;
# recorded for inspection only, never asserted.
SMALL_Q_POLYNOMIAL_TABLE: dict[int, tuple[int, int]] = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 0),
    4: (1, -2),
    5: (-1, -5),
    6: (1, -6),
}


def small_q_polynomial(k: int, q: float) -> float:
    """Reference value of the tabulated small-q polynomial p_k^k."""
    sign, exponent = SMALL_Q_POLYNOMIAL_TABLE[k]
    return sign * q**exponent


def shell_sum_oracle(s: int, p: int | Prime, tol: float = 1e-18) -> float:
    """p-adic unit-ball integral of |x|^s as a sum over shells |x| = p^-k.

    Each shell carries measure (1 - 1/p) p^-k and the integrand contributes
    p^(-ks), giving (1 - 1/p) sum_k p^(-k(s+1)).
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    base = int(p)
    if not is_prime(base):
        raise ValueError(f"p must be prime, got {base}")
    ratio = float(base) ** (-(s + 1))
    total, term = 0.0, 1.0 - 1.0 / base
    while term > tol * (total + 1.0):
        total += term
        term *= ratio
    return total


def padic_correspondence_check(s: int, p: int | Prime) -> float:
    """|jackson_integral(x^s, 1, q=1/p) - shell-sum oracle|; small iff they agree."""
    base = int(p)
    value = jackson_integral(lambda x: x**s, 1.0, 1.0 / base, tol=1e-16)
    return abs(value - shell_sum_oracle(s, base))
