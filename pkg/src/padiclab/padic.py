"""Base-p digit expansions and the p-adic norm.

Integers expand as finite digit series sum(a_k * p^k) with a_k in {0..p-1}.
Rationals are handled through the valuation decomposition r = p^nu * m/n with
m, n coprime to p; only the norm |r|_p = p^(-nu) is needed downstream, so no
infinite digit tails are ever materialised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality check (exact below 3.3e24)."""
    if n < 2:
        return False
    if n in _MR_WITNESSES:
        return True
    if any(n % w == 0 for w in _MR_WITNESSES):
        return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Prime:
    """A validated prime base."""

    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or not is_prime(self.value):
            raise ValueError(f"not a prime: {self.value!r}")

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value


@dataclass(frozen=True)
class PAdicDigits:
    """Canonical digit expansion of a nonnegative integer.

    ``digits[0]`` is the least significant digit.  ``valuation`` is the index
    of the first nonzero digit, i.e. the p-adic valuation of the value, and is
    None for the zero expansion ``[0]``.
    """

    digits: tuple[int, ...]
    base: int
    valuation: int | None

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if not self.digits:
            raise ValueError("empty digit sequence")
        if any(d < 0 or d >= self.base for d in self.digits):
            raise ValueError(f"digit out of range for base {self.base}: {self.digits}")
        if len(self.digits) > 1 and self.digits[-1] == 0:
            raise ValueError("non-canonical expansion (trailing zero digit)")

    def __iter__(self):
        return iter(self.digits)

    def __len__(self) -> int:
        return len(self.digits)


def _coerce_base(p: int | Prime, strict: bool) -> int:
    base = int(p)
    if strict and not isinstance(p, Prime) and not is_prime(base):
        raise ValueError(f"strict mode requires a prime base, got {base}")
    if base < 2:
        raise ValueError("base must be >= 2")
    return base


def digits(n: int, p: int | Prime, strict: bool = False) -> PAdicDigits:
    """Expand a nonnegative integer in base p, least significant digit first.

    ``strict=True`` insists on a prime base; the default accepts any integer
    base >= 2 so composite bases can drive wave generation.
    """
    base = _coerce_base(p, strict)
    if n < 0:
        raise ValueError("digit expansion requires n >= 0")
    if n == 0:
        return PAdicDigits((0,), base, None)
    seq = []
    while n:
        n, d = divmod(n, base)
        seq.append(d)
    val = next(i for i, d in enumerate(seq) if d != 0)
    return PAdicDigits(tuple(seq), base, val)


def from_digits(d: PAdicDigits | Sequence[int], base: int | None = None) -> int:
    """Reconstruct the integer from its digit expansion (inverse of digits)."""
    if isinstance(d, PAdicDigits):
        seq, b = d.digits, d.base
    else:
        if base is None:
            raise ValueError("raw digit sequences need an explicit base")
        seq, b = tuple(d), base
        if any(x < 0 or x >= b for x in seq):
            raise ValueError(f"digit out of range for base {b}: {seq}")
    total = 0
    for x in reversed(seq):
        total = total * b + x
    return total


def valuation(r: int | Fraction, p: int | Prime) -> int | None:
    """p-adic valuation nu with r = p^nu * m/n, gcd(m, p) = gcd(n, p) = 1.

    Returns None for r = 0 (the valuation is +infinity by convention).
    """
    base = _coerce_base(p, strict=True) if not isinstance(p, Prime) else int(p)
    frac = Fraction(r)
    if frac == 0:
        return None

    def _vp(m: int) -> int:
        m = abs(m)
        v = 0
        while m % base == 0:
            m //= base
            v += 1
        return v

    return _vp(frac.numerator) - _vp(frac.denominator)


def padic_norm(r: int | Fraction, p: int | Prime) -> tuple[int | None, float]:
    """p-adic norm |r|_p = p^(-nu); |0|_p = 0 with undefined valuation."""
    nu = valuation(r, p)
    if nu is None:
        return None, 0.0
    return nu, float(int(p)) ** (-nu)
