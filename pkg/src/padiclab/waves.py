"""Fractal price mapping f_b and wave-pattern generation.

The map sends an integer r with base-p digits (a_0, a_1, ...) to
f_b(r) = sum_k a_k p^(b k).  At b = 1 it is the identity on integers; for
b < 1 the wave oscillates inside a bounded envelope (subcritical), for b > 1
the leading digit dominates (supercritical).  The map obeys the discrete
scale invariance f_b(p r) = p^b f_b(r), inherited from the digit shift law.

Non-integer rational bases use the greedy beta-expansion with digit set
{0 .. ceil(base)-1}; this is the deterministic canonical choice among
beta-expansions and is what the triangle patterns run on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .padic import digits as padic_digits


class PatternError(ValueError):
    """A pattern recipe is invalid for the requested parameters."""


@dataclass(frozen=True)
class WaveSpec:
    """Wave parameters: base (prime, composite, or rational), exponent, digit span.

    ``base`` may be an int, a float, or a Fraction; non-integer values switch
    digit extraction to the greedy beta-expansion.  The default r range is
    [0, floor(base)^n_digits) and is capped at ``max_points`` samples.
    """

    base: float | int | Fraction
    b_frac: float
    n_digits: int = 6
    r_start: int = 0
    r_stop: int | None = None
    max_points: int = 2_000_000

    def __post_init__(self) -> None:
        if float(self.base) <= 1.0:
            raise ValueError("base must exceed 1")
        if self.base_is_integer and int(self.base) < 2:
            raise ValueError("integer base must be >= 2")
        if self.b_frac <= 0:
            raise ValueError("fractal exponent b must be positive")
        if self.n_digits < 1:
            raise ValueError("n_digits must be >= 1")
        if self.r_start < 0:
            raise ValueError("r range must be nonnegative")

    @property
    def base_is_integer(self) -> bool:
        b = self.base
        if isinstance(b, int):
            return True
        if isinstance(b, Fraction):
            return b.denominator == 1
        return float(b).is_integer()

    @property
    def digit_bound(self) -> int:
        """Digits are drawn from {0 .. digit_bound - 1}."""
        return int(math.ceil(float(self.base)))

    def resolved_range(self) -> tuple[int, int]:
        stop = self.r_stop
        if stop is None:
            stop = int(math.floor(float(self.base))) ** self.n_digits
        if stop - self.r_start > self.max_points:
            raise ValueError(
                f"r range of {stop - self.r_start} points exceeds cap {self.max_points}"
            )
        return self.r_start, stop


@dataclass(frozen=True)
class WaveSeries:
    """An ordered series of (r, value) samples."""

    r: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.r) != len(self.values):
            raise ValueError("r and values must have equal length")
        if len(self.r) > 1 and not np.all(np.diff(self.r) > 0):
            raise ValueError("r must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("series values must be finite")

    def __len__(self) -> int:
        return len(self.r)


class PatternKind(Enum):
    IMPULSE = "impulse"
    ZIGZAG = "zigzag"
    FLAT = "flat"
    TRIANGLE_CONVERGING = "triangle-converging"
    TRIANGLE_EXPANDING = "triangle-expanding"
    DIAGONAL = "diagonal"


def beta_digits(r: int, base: Fraction | float, n_max: int = 64) -> list[int]:
    """Greedy beta-expansion digits of a nonnegative integer, least significant first.

    Rational bases are expanded exactly through Fraction arithmetic.  The
    integer part always terminates; fractional tails below beta^0 are not
    generated (the map only consumes integer-position digits).
    """
    if r < 0:
        raise ValueError("beta expansion requires r >= 0")
    beta = Fraction(base) if not isinstance(base, Fraction) else base
    if beta <= 1:
        raise ValueError("base must exceed 1")
    if r == 0:
        return [0]
    # largest K with beta^K <= r
    power, k = Fraction(1), 0
    while power * beta <= r:
        power *= beta
        k += 1
        if k > n_max:
            raise ValueError("beta expansion exceeded n_max positions")
    out = [0] * (k + 1)
    rem = Fraction(r)
    for i in range(k, -1, -1):
        d = int(rem / power)  # rem < beta^{i+1} so d <= ceil(beta) - 1
        out[i] = d
        rem -= d * power
        power /= beta
    return out


def _digit_sequence(r: int, spec: WaveSpec) -> Sequence[int]:
    if spec.base_is_integer:
        return padic_digits(r, int(spec.base)).digits
    return beta_digits(r, spec.base)


def value_of_digits(digit_seq: Sequence[int], base: float | Fraction, b: float) -> float:
    """sum a_k * base^(b k) for an explicit digit window, least significant first."""
    t = float(base) ** b
    total, power = 0.0, 1.0
    for a in digit_seq:
        total += a * power
        power *= t
    return total


def f_b_map(r: int, spec: WaveSpec) -> float:
    """Fractal price map f_b(r) = sum a_k base^(b k) over the digits of r."""
    if r < 0:
        raise ValueError("f_b is defined for r >= 0")
    return value_of_digits(_digit_sequence(r, spec), spec.base, spec.b_frac)


def _dense_table(p: int, b: float, n_digits: int) -> np.ndarray:
    """f_b over the full block [0, p^n) by digit-position dynamic programming.

    Accumulates low digits first, matching the scalar loop term order, so the
    table is bitwise identical to per-r evaluation.
    """
    t = float(p) ** b
    table = np.zeros(1)
    power = 1.0
    for _ in range(n_digits):
        table = (table[None, :] + (np.arange(p) * power)[:, None]).reshape(-1)
        power *= t
    return table


def wave_series(spec: WaveSpec) -> WaveSeries:
    """Evaluate f_b over the spec's r range."""
    start, stop = spec.resolved_range()
    r = np.arange(start, stop, dtype=np.int64)
    if spec.base_is_integer:
        p = int(spec.base)
        n_digits = max(spec.n_digits, len(padic_digits(max(stop - 1, 0), p)))
        table = _dense_table(p, spec.b_frac, n_digits)
        values = table[r]
    else:
        values = np.array([f_b_map(int(k), spec) for k in r])
    meta = {"base": str(spec.base), "b": spec.b_frac, "r_start": start, "r_stop": stop}
    return WaveSeries(r=r, values=values, meta=meta)


def random_series(spec: WaveSpec, steps: int, seed: int) -> WaveSeries:
    """Irregular signal: r drawn uniformly from the spec range per step (seeded).

    The draw distribution and seed are declared in the metadata so the output
    is reproducible and self-describing.
    """
    start, stop = spec.resolved_range()
    rng = np.random.default_rng(seed)
    draws = rng.integers(start, stop, size=steps)
    if spec.base_is_integer:
        p = int(spec.base)
        n_digits = max(spec.n_digits, len(padic_digits(max(stop - 1, 0), p)))
        values = _dense_table(p, spec.b_frac, n_digits)[draws]
    else:
        values = np.array([f_b_map(int(k), spec) for k in draws])
    meta = {
        "base": str(spec.base),
        "b": spec.b_frac,
        "seed": seed,
        "distribution": f"uniform integers [{start}, {stop})",
    }
    return WaveSeries(r=np.arange(steps), values=values, meta=meta)


# Pattern recipes: each entry lists the digit windows (least significant digit
# first) whose f_b values become the waypoint levels.  Impulse, zigzag, flat
# and diagonal run on any integer base >= 3; levels alternate for every b > 0
# except where noted in pattern().
_WAYPOINT_WINDOWS = {
    PatternKind.IMPULSE: [(0,), (2, 2), (1, 1), (0, 2, 2), (0, 2, 1), (2, 2, 2)],
    PatternKind.DIAGONAL: [(0,), (2, 2), (1, 1), (0, 2, 1), (0, 1, 1), (1, 2, 1)],
    PatternKind.ZIGZAG: [(2, 2), (1, 1), (2, 1), (0,)],
    PatternKind.FLAT: [(2, 2), (1, 1), (1, 2), (0, 1)],
}

_AGAINST_TREND = {PatternKind.ZIGZAG, PatternKind.FLAT,
                  PatternKind.TRIANGLE_CONVERGING, PatternKind.TRIANGLE_EXPANDING}


def _triangle_waypoints(spec: WaveSpec, expanding: bool) -> list[float]:
    """Swing amplitudes are f_b values of single-digit windows beta^(b k)."""
    if spec.base_is_integer:
        raise PatternError("triangle patterns need a rational non-integer base")
    if not isinstance(spec.base, Fraction):
        raise PatternError("triangle base must be given as a Fraction")
    amps = [value_of_digits((0,) * k + (1,), spec.base, spec.b_frac) for k in range(1, 6)]
    if not expanding:
        amps = amps[::-1]
    level = sum(amps)  # keeps every waypoint positive
    points = [level]
    sign = -1.0
    for a in amps:
        level += sign * a
        points.append(level)
        sign = -sign
    return points


def _interpolate(points: list[float], substeps: int) -> np.ndarray:
    if substeps < 1:
        raise ValueError("substeps must be >= 1")
    out = [points[0]]
    for a, b in zip(points, points[1:]):
        out.extend(a + (b - a) * (j / substeps) for j in range(1, substeps + 1))
    return np.array(out)


def pattern(kind: PatternKind, spec: WaveSpec, trend: int = 1, substeps: int = 8) -> WaveSeries:
    """Generate an Elliott-style preset: 5 legs for impulse/diagonal/triangles, 3 for zigzag/flat.

    Waypoint levels are fixed digit-window selections of f_b; legs are filled
    with ``substeps`` linear steps so every leg is strictly monotone.  The
    generated waypoints are validated against the kind's segment signature,
    so parameter choices that break a recipe fail loudly.
    """
    if trend not in (1, -1):
        raise ValueError("trend must be +1 or -1")

    if kind in (PatternKind.TRIANGLE_CONVERGING, PatternKind.TRIANGLE_EXPANDING):
        points = _triangle_waypoints(spec, expanding=kind is PatternKind.TRIANGLE_EXPANDING)
    else:
        if not spec.base_is_integer or int(spec.base) < 3:
            raise PatternError(f"{kind.value} preset needs an integer base >= 3")
        windows = _WAYPOINT_WINDOWS[kind]
        points = [value_of_digits(w, spec.base, spec.b_frac) for w in windows]

    deltas = [b - a for a, b in zip(points, points[1:])]
    if any(d == 0 for d in deltas) or any(x * y >= 0 for x, y in zip(deltas, deltas[1:])):
        raise PatternError(f"{kind.value} waypoints do not alternate for base={spec.base}, b={spec.b_frac}")
    expected_legs = 3 if kind in (PatternKind.ZIGZAG, PatternKind.FLAT) else 5
    if len(deltas) != expected_legs:
        raise PatternError(f"{kind.value} recipe produced {len(deltas)} legs, wanted {expected_legs}")
    if kind in (PatternKind.IMPULSE, PatternKind.DIAGONAL):
        # ascending highs and lows on the natural (uptrend) waypoints; the
        # impulse additionally keeps wave 4 out of wave 1 territory
        highs, lows = points[1::2], points[0::2]
        ordered = all(a < b for a, b in zip(highs, highs[1:]))
        ordered &= all(a < b for a, b in zip(lows, lows[1:]))
        if kind is PatternKind.IMPULSE:
            ordered &= points[4] > points[1]
        if not ordered:
            raise PatternError(
                f"{kind.value} level ordering breaks at base={spec.base}, b={spec.b_frac}"
            )

    direction = -trend if kind in _AGAINST_TREND else trend
    first_leg_sign = 1.0 if deltas[0] > 0 else -1.0
    flip = direction / first_leg_sign
    origin = points[0]
    points = [origin + flip * (x - origin) for x in points]

    values = _interpolate(points, substeps)
    meta = {
        "kind": kind.value,
        "base": str(spec.base),
        "b": spec.b_frac,
        "trend": trend,
        "substeps": substeps,
    }
    return WaveSeries(r=np.arange(len(values)), values=values, meta=meta)


def envelope_compose(g: Sequence[float], spec: WaveSpec, scale: float) -> WaveSeries:
    """Map a sampled signal through f_b: n(t) = round(scale (g - min g)), emit f_b(n).

    At b = 1 this returns the quantised affine image of g exactly, so the
    construction degrades to the identity when the deformation is off.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    samples = np.asarray(g, dtype=float)
    if samples.size == 0:
        raise ValueError("empty sample sequence")
    if not np.all(np.isfinite(samples)):
        raise ValueError("samples must be finite")
    n = np.rint(scale * (samples - samples.min())).astype(np.int64)
    cache: dict[int, float] = {}
    values = np.array([cache.setdefault(int(k), f_b_map(int(k), spec)) for k in n])
    meta = {"base": str(spec.base), "b": spec.b_frac, "scale": scale, "samples": len(samples)}
    return WaveSeries(r=np.arange(len(values)), values=values, meta=meta)


def delay_embed(series: Sequence[float], m: int, stride: int = 1) -> np.ndarray:
    """Delay-embed a scalar series into m-vectors with component lag ``stride``.

    Returns an array of shape (len - (m-1)*stride, m); row i is
    (x[i], x[i+stride], ..., x[i+(m-1)*stride]).
    """
    if m < 1 or stride < 1:
        raise ValueError("m and stride must be >= 1")
    x = np.asarray(series, dtype=float)
    count = len(x) - (m - 1) * stride
    if count < 1:
        raise ValueError(f"series of length {len(x)} is shorter than the embedding window")
    idx = np.arange(count)[:, None] + stride * np.arange(m)[None, :]
    return x[idx]


def monotone_segments(values: Sequence[float]) -> list[tuple[int, int, int]]:
    """Split a series into maximal strictly monotone runs (start, end, sign).

    Zero steps extend the current run without changing its sign.
    """
    v = np.asarray(values, dtype=float)
    if len(v) < 2:
        return []
    segs: list[tuple[int, int, int]] = []
    start, sign = 0, 0
    for i in range(1, len(v)):
        step = v[i] - v[i - 1]
        s = 0 if step == 0 else (1 if step > 0 else -1)
        if s == 0 or s == sign:
            continue
        if sign == 0:
            sign = s
            continue
        segs.append((start, i - 1, sign))
        start, sign = i - 1, s
    segs.append((start, len(v) - 1, sign))
    return segs


def swing_amplitudes(values: Sequence[float]) -> list[float]:
    """Absolute level change of each monotone segment."""
    v = np.asarray(values, dtype=float)
    return [abs(v[e] - v[s]) for s, e, _ in monotone_segments(v)]
