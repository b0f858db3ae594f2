"""Piecewise-linear sampled functions with endpoint clamping."""
from __future__ import annotations

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import InvalidParameterError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation through ``(grid[i], values[i])`` knots.

    Outside ``[grid[0], grid[-1]]`` the value is held at the nearest endpoint;
    every such clamped evaluation increments :attr:`clamp_count` on the
    instance and logs a warning the first time.
    """

    grid: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        values = tuple(float(v) for v in self.values)
        if not grid:
            raise InvalidParameterError("profile needs at least one knot")
        if len(grid) != len(values):
            raise InvalidParameterError("profile grid and values differ in length")
        if not all(math.isfinite(g) for g in grid) or not all(math.isfinite(v) for v in values):
            raise InvalidParameterError("profile contains NaN or infinite samples")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidParameterError("profile grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_clamps", [0])

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "PiecewiseLinear":
        pairs = [tuple(p) for p in pairs]
        if any(len(p) != 2 for p in pairs):
            raise InvalidParameterError("profile pairs must be [position, value]")
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def constant(cls, value: float) -> "PiecewiseLinear":
        return cls((0.0,), (value,))

    def to_pairs(self) -> list[list[float]]:
        return [[g, v] for g, v in zip(self.grid, self.values)]

    @property
    def clamp_count(self) -> int:
        return self._clamps[0]

    @property
    def start(self) -> float:
        return self.grid[0]

    @property
    def end(self) -> float:
        return self.grid[-1]

    def _note_clamp(self, n: int) -> None:
        if n:
            if self._clamps[0] == 0:
                log.warning("profile evaluated outside [%g, %g]; clamping to endpoint", self.start, self.end)
            self._clamps[0] += n

    def __call__(self, x: float) -> float:
        grid, values = self.grid, self.values
        if x <= grid[0] or x >= grid[-1]:
            if x < grid[0] or x > grid[-1]:
                self._note_clamp(1)
            return values[0] if x <= grid[0] else values[-1]
        i = bisect_right(grid, x) - 1
        x0, x1 = grid[i], grid[i + 1]
        y0, y1 = values[i], values[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        outside = np.count_nonzero((x < self.grid[0]) | (x > self.grid[-1]))
        self._note_clamp(int(outside))
        return np.interp(x, self.grid, self.values)

    def max_value(self) -> float:
        return max(self.values)

    def min_value(self) -> float:
        return min(self.values)


def trapezoid(x: np.ndarray, y: np.ndarray) -> float:
    """Composite trapezoid rule; exact for piecewise-linear ``y`` on knots ``x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return 0.0
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def cumulative_trapezoid(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(x)
    if x.size > 1:
        out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out
