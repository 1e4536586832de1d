"""Fit the fractal wave model P(t) = A * f_b(t + t0) + C to price data.

The fitting procedure is a deterministic grid search over (base, b, t0) with
the affine pair (A, C) solved in closed form by least squares at every grid
point.  Bar number plays the role of the map argument; calendar gaps are
ignored.  Ties break toward the smallest b, then the smallest t0, then the
base listed first, independent of evaluation order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .waves import WaveSpec, wave_series

DEFAULT_BASES = (2, 3, 5)
DEFAULT_B_GRID = (0.2, 2.0, 0.05)
DEFAULT_T0_RANGE = range(0, 81)


@dataclass(frozen=True)
class PriceSeries:
    """Timestamped price samples (bar-indexed when no numeric times exist)."""

    timestamps: tuple
    prices: np.ndarray
    source: str = ""

    def __post_init__(self) -> None:
        if len(self.timestamps) != len(self.prices):
            raise ValueError("timestamps and prices must have equal length")
        if not np.all(np.isfinite(self.prices)):
            raise ValueError("prices must be finite")
        numeric = [t for t in self.timestamps if isinstance(t, (int, float))]
        if len(numeric) == len(self.timestamps) and len(numeric) > 1:
            if not all(a < b for a, b in zip(numeric, numeric[1:])):
                raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True)
class FitResult:
    base: float
    b_frac: float
    t0: int
    a_scale: float
    c_offset: float
    rmse: float
    fitted: np.ndarray
    skipped_grid_points: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "base": self.base,
            "b": self.b_frac,
            "t0": self.t0,
            "A": self.a_scale,
            "C": self.c_offset,
            "rmse": self.rmse,
            "skipped_grid_points": list(self.skipped_grid_points),
        }


def load_series(
    path: str | Path, column: str = "close", time_column: str | None = None
) -> PriceSeries:
    """Read one numeric column of a headered CSV; malformed rows name their line."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: no data rows")
        fields = [f.strip() for f in reader.fieldnames]
        if column not in fields:
            raise ValueError(f"{path}: missing column {column!r} (have {fields})")
        if time_column is not None and time_column not in fields:
            raise ValueError(f"{path}: missing time column {time_column!r}")
        prices, stamps = [], []
        for lineno, row in enumerate(reader, start=2):
            raw = (row.get(column) or "").strip()
            try:
                prices.append(float(raw))
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric {column!r} cell {raw!r}") from None
            if time_column is None:
                stamps.append(lineno - 2)
            else:
                cell = (row.get(time_column) or "").strip()
                try:
                    stamps.append(float(cell))
                except ValueError:
                    stamps.append(cell)
    if not prices:
        raise ValueError(f"{path}: no data rows")
    return PriceSeries(tuple(stamps), np.array(prices), source=str(path))


def rmse(a: Sequence[float], b: Sequence[float]) -> float:
    """Root-mean-square difference of two equal-length series."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(np.mean((x - y) ** 2)))


def _regressor_table(base: float | Fraction, b: float, length: int) -> np.ndarray:
    spec = WaveSpec(base=base, b_frac=b, n_digits=1, r_stop=length, max_points=max(length, 2))
    return wave_series(spec).values


def fit_padic(
    series: PriceSeries,
    bases: Sequence[float] = DEFAULT_BASES,
    b_grid: tuple[float, float, float] = DEFAULT_B_GRID,
    t0_range: Sequence[int] = DEFAULT_T0_RANGE,
) -> FitResult:
    """Grid-search (base, b, t0); solve A, C in closed form at each point.

    Grid points whose regressor is constant over the window are skipped with a
    diagnostic rather than divided through.
    """
    y = series.prices
    n = len(y)
    if n < 8:
        raise ValueError("need at least 8 samples to fit")
    if not bases or not t0_range:
        raise ValueError("empty grid")
    b_lo, b_hi, b_step = b_grid
    if b_step <= 0 or b_hi < b_lo:
        raise ValueError("bad b grid")
    n_b = int(math.floor((b_hi - b_lo) / b_step + 1e-9)) + 1
    b_values = [b_lo + k * b_step for k in range(n_b)]
    t0_values = sorted(set(int(t) for t in t0_range))
    if any(t < 0 for t in t0_values):
        raise ValueError("t0 must be nonnegative")

    y_mean = float(np.mean(y))
    y_centered = y - y_mean

    best: tuple[float, float, int, int] | None = None  # (rmse, b, t0, base index)
    best_params: tuple[float, float, float, np.ndarray] | None = None
    skipped: list[str] = []
    max_index = n + max(t0_values)

    # b-major iteration so the first strict minimum realises the tie-break order
    for b in b_values:
        for t0 in t0_values:
            for base_idx, base in enumerate(bases):
                table = _regressor_cache(base, b, max_index)
                x = table[t0 : t0 + n]
                x_mean = float(np.mean(x))
                x_centered = x - x_mean
                sxx = float(x_centered @ x_centered)
                if sxx <= 1e-30 * n * (1.0 + x_mean * x_mean):
                    skipped.append(f"degenerate regressor at base={base}, b={b:.6g}, t0={t0}")
                    continue
                a_hat = float(x_centered @ y_centered) / sxx
                c_hat = y_mean - a_hat * x_mean
                resid = y - (a_hat * x + c_hat)
                err = float(np.sqrt(np.mean(resid**2)))
                key = (err, b, t0, base_idx)
                if best is None or key < best:
                    best = key
                    best_params = (float(base), a_hat, c_hat, a_hat * x + c_hat)

    if best is None or best_params is None:
        raise ValueError("every grid point was degenerate; nothing to fit")
    err, b_star, t0_star, _ = best
    base_star, a_star, c_star, fitted = best_params
    return FitResult(
        base=base_star,
        b_frac=b_star,
        t0=int(t0_star),
        a_scale=a_star,
        c_offset=c_star,
        rmse=err,
        fitted=fitted,
        skipped_grid_points=tuple(skipped),
    )


_CACHE: dict[tuple[float, float, int], np.ndarray] = {}


def _regressor_cache(base: float | Fraction, b: float, length: int) -> np.ndarray:
    key = (float(base), float(b), length)
    if key not in _CACHE:
        if len(_CACHE) > 512:
            _CACHE.clear()
        _CACHE[key] = _regressor_table(base, b, length)
    return _CACHE[key]
