"""Harmonic-number depth oracle, slope fitting, and trial summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass
class FitResult:
    slope: float
    intercept: float
    r_squared: float


@dataclass
class DepthSummary:
    """Means over trials, in tree levels (1-based depth).

    The ``*_scaled`` properties divide by ``log2 n``; ``root_r1_scaled``
    divides by ``log2 log2 n``.
    """

    n: int
    trials: int
    mean_depth_smallest: float
    mean_depth_largest: float
    mean_depth_all: float
    mean_height: float
    mean_root_r1: float

    def _scale(self, v):
        return v / math.log2(self.n) if self.n > 1 else math.nan

    @property
    def smallest_scaled(self):
        return self._scale(self.mean_depth_smallest)

    @property
    def largest_scaled(self):
        return self._scale(self.mean_depth_largest)

    @property
    def depth_scaled(self):
        return self._scale(self.mean_depth_all)

    @property
    def height_scaled(self):
        return self._scale(self.mean_height)

    @property
    def root_r1_scaled(self):
        if self.n <= 2:
            return math.nan
        return self.mean_root_r1 / math.log2(math.log2(self.n))


def harmonic(m: int) -> float:
    if m < 1:
        raise ValueError("harmonic numbers start at m = 1")
    total = 0.0
    for i in range(1, m + 1):
        total += 1.0 / i
    return total


def harmonic_table(n: int) -> np.ndarray:
    """``H_0..H_n`` (``H_0 = 0``), summed in ascending order."""
    return np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, n + 1))))


def expected_depth(j: int, n: int) -> float:
    """Expected 1-based depth of the j-th smallest of n keys, ``H_j + H_{n-j+1} - 1``."""
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    return harmonic(j) + harmonic(n - j + 1) - 1


def _ols(x, y) -> FitResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise ValueError("need at least 3 points")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    ss_res = float((resid ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return FitResult(float(slope), float(intercept), min(1.0, max(0.0, r2)))


def fit_loglog(points, x_transform: str = "log") -> FitResult:
    """Least squares of ``log2 y`` against ``log2 x`` or ``log2 log2 x``."""
    pts = list(points)
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if (ys <= 0).any() or (xs <= 0).any():
        raise ValueError("fit_loglog needs positive values")
    if x_transform == "log":
        tx = np.log2(xs)
    elif x_transform == "loglog":
        if (xs <= 1).any():
            raise ValueError("log log transform needs x > 1")
        tx = np.log2(np.log2(xs))
    else:
        raise ValueError(f"unknown x_transform {x_transform!r}")
    return _ols(tx, np.log2(ys))


def fit_linear(xs, ys) -> FitResult:
    return _ols(xs, ys)


def summarize(runs: Iterable, n: int) -> DepthSummary:
    """Average :class:`~zipzip.ziptree.TreeStats` records that share ``n``.

    ``runs`` may be a generator; records are consumed one at a time.
    """
    count = 0
    acc = [0.0] * 5
    for st in runs:
        if st.n != n:
            raise ValueError(f"run has {st.n} keys, expected {n}")
        count += 1
        acc[0] += st.smallest_depth
        acc[1] += st.largest_depth
        acc[2] += st.mean_depth
        acc[3] += st.height
        acc[4] += st.root_r1 if st.root_r1 is not None else 0
    if count == 0:
        raise ValueError("summarize needs at least one run")
    return DepthSummary(n, count, *(a / count for a in acc))
