"""Scalar profiles and extended-real graph functions ``G(x3, x4)``.

Extended reals are plain floats: ``-inf``, finite values and ``+inf`` compare
totally, which is all the membership test ``x2 > G`` needs.  NaN is never a
legal value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Rect = tuple[float, float, float, float]  # (x3_lo, x3_hi, x4_lo, x4_hi)


class PiecewiseLinear:
    """Piecewise-linear scalar function given by a breakpoint table.

    A breakpoint may be repeated once to encode a jump: ``xs = [0, 0]``,
    ``ys = [0, -1]`` jumps from 0 to -1 at ``x = 0``.  At a jump the function
    takes the larger one-sided value, which makes it upper semi-continuous.
    Outside the table the function is extended either by its end values
    (``extrapolate="constant"``) or by the end slopes (``"linear"``).
    """

    def __init__(self, xs: Sequence[float], ys: Sequence[float], extrapolate: str = "constant"):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size == 0:
            raise ValueError("xs and ys must be non-empty 1-d sequences of equal length")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("breakpoint table must be finite")
        if np.any(np.diff(xs) < 0):
            raise ValueError("breakpoints must be non-decreasing")
        if xs.size >= 3 and np.any((xs[2:] == xs[1:-1]) & (xs[1:-1] == xs[:-2])):
            raise ValueError("a breakpoint may be repeated at most once")
        if extrapolate not in ("constant", "linear"):
            raise ValueError("extrapolate must be 'constant' or 'linear'")
        self.xs = xs
        self.ys = ys
        self.extrapolate = extrapolate

    def __repr__(self) -> str:
        return f"PiecewiseLinear(xs={self.xs.tolist()}, ys={self.ys.tolist()}, extrapolate={self.extrapolate!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PiecewiseLinear)
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.ys, other.ys)
            and self.extrapolate == other.extrapolate
        )

    @classmethod
    def constant(cls, value: float) -> "PiecewiseLinear":
        return cls([0.0], [value])

    @classmethod
    def linear(cls, slope: float, intercept: float = 0.0) -> "PiecewiseLinear":
        return cls([0.0, 1.0], [intercept, intercept + slope], extrapolate="linear")

    @classmethod
    def step(cls, locations: Sequence[float], values: Sequence[float]) -> "PiecewiseLinear":
        """Step function equal to ``values[0]`` left of ``locations[0]`` and so on."""
        if len(values) != len(locations) + 1:
            raise ValueError("need one more value than step locations")
        xs, ys = [], []
        for loc, left, right in zip(locations, values[:-1], values[1:]):
            xs += [loc, loc]
            ys += [left, right]
        if not xs:
            return cls.constant(values[0])
        return cls(xs, ys)

    # -- structure -------------------------------------------------------
    def _segments(self):
        """Non-degenerate segments as (x0, x1, slope)."""
        xs, ys = self.xs, self.ys
        out = []
        for i in range(xs.size - 1):
            if xs[i + 1] > xs[i]:
                out.append((xs[i], xs[i + 1], (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])))
        return out

    @property
    def jumps(self) -> list[tuple[float, float, float]]:
        """``(location, left_value, right_value)`` for every jump."""
        xs, ys = self.xs, self.ys
        return [(xs[i], ys[i], ys[i + 1]) for i in range(xs.size - 1) if xs[i + 1] == xs[i] and ys[i + 1] != ys[i]]

    def _end_slopes(self) -> tuple[float, float]:
        if self.extrapolate == "constant":
            return 0.0, 0.0
        segs = self._segments()
        if not segs:
            return 0.0, 0.0
        return segs[0][2], segs[-1][2]

    def slopes(self) -> np.ndarray:
        s = [seg[2] for seg in self._segments()]
        s.extend(self._end_slopes())
        return np.asarray(s, dtype=float)

    def lipschitz_constant(self) -> float:
        if self.jumps:
            return math.inf
        s = self.slopes()
        return float(np.max(np.abs(s))) if s.size else 0.0

    def is_non_increasing(self) -> bool:
        return bool(np.all(self.slopes() <= 0) and all(r <= l for _, l, r in self.jumps))

    def is_non_decreasing(self) -> bool:
        return bool(np.all(self.slopes() >= 0) and all(r >= l for _, l, r in self.jumps))

    @property
    def kinks(self) -> np.ndarray:
        return np.unique(self.xs)

    # -- evaluation ------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xs, ys = self.xs, self.ys
        if xs.size == 1:
            out = np.full_like(x, ys[0])
        else:
            # xs[idx] <= x < xs[idx + 1]; out-of-table points are overwritten below
            idx = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, xs.size - 2)
            x0, x1 = xs[idx], xs[idx + 1]
            y0, y1 = ys[idx], ys[idx + 1]
            width = x1 - x0
            with np.errstate(invalid="ignore", divide="ignore"):
                frac = np.where(width > 0, (x - x0) / np.where(width > 0, width, 1.0), 0.0)
            out = y0 + np.clip(frac, 0.0, 1.0) * (y1 - y0)
            for loc, left, right in self.jumps:
                out = np.where(x == loc, max(left, right), out)
        lo_slope, hi_slope = self._end_slopes()
        out = np.where(x < xs[0], ys[0] + lo_slope * (x - xs[0]), out)
        out = np.where(x > xs[-1], ys[-1] + hi_slope * (x - xs[-1]), out)
        return out if out.ndim else float(out)

    def to_table(self) -> dict:
        return {"x": self.xs.tolist(), "y": self.ys.tolist(), "extrapolate": self.extrapolate}


@dataclass(frozen=True)
class JumpSegment:
    """A segment across which ``G`` jumps.

    ``value_below`` is the one-sided value on the side of smaller ``x4``
    (for a segment that is not horizontal: the side to the right of the
    direction start -> end) and ``value_above`` the value on the other side.
    Endpoints may be infinite for segments that are whole lines.
    """

    start: tuple[float, float]
    end: tuple[float, float]
    value_below: float
    value_above: float

    @classmethod
    def horizontal(cls, x4: float, value_below: float, value_above: float, x3_range=(-math.inf, math.inf)):
        return cls((x3_range[0], x4), (x3_range[1], x4), value_below, value_above)

    def is_horizontal(self, tol: float = 1e-12) -> bool:
        return abs(self.end[1] - self.start[1]) <= tol

    def intersects(self, rect: Rect) -> bool:
        x3lo, x3hi, x4lo, x4hi = rect
        (a3, a4), (b3, b4) = self.start, self.end
        if a4 == b4:
            return x4lo <= a4 <= x4hi and min(a3, b3) <= x3hi and max(a3, b3) >= x3lo
        if a3 == b3:
            return x3lo <= a3 <= x3hi and min(a4, b4) <= x4hi and max(a4, b4) >= x4lo
        return _clip_segment((a3, a4), (b3, b4), rect)


def _clip_segment(a, b, rect: Rect) -> bool:
    """Liang-Barsky test for a (possibly very long) oblique segment."""
    big = 1e300
    a = tuple(max(-big, min(big, c)) for c in a)
    b = tuple(max(-big, min(big, c)) for c in b)
    x3lo, x3hi, x4lo, x4hi = rect
    d3, d4 = b[0] - a[0], b[1] - a[1]
    t0, t1 = 0.0, 1.0
    for p, q in ((-d3, a[0] - x3lo), (d3, x3hi - a[0]), (-d4, a[1] - x4lo), (d4, x4hi - a[1])):
        if p == 0:
            if q < 0:
                return False
            continue
        r = q / p
        if p < 0:
            t0 = max(t0, r)
        else:
            t1 = min(t1, r)
        if t0 > t1:
            return False
    return True


@dataclass(frozen=True)
class GraphFunction:
    """Extended-real function ``G(x3, x4)`` describing ``E = {x2 > G(x3, x4)}``.

    ``func`` is vectorised over numpy arrays.  ``b`` records where the
    ``-inf`` region starts: its closure is ``{x4 >= b}`` (``b = +inf`` when
    ``G`` never takes the value ``-inf``).
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    jump_segments: tuple[JumpSegment, ...] = ()
    b: float = math.inf
    name: str = "G"

    def __call__(self, x3, x4):
        x3 = np.asarray(x3, dtype=float)
        x4 = np.asarray(x4, dtype=float)
        shape = np.broadcast(x3, x4).shape
        out = np.broadcast_to(np.asarray(self.func(x3, x4), dtype=float), shape)
        return np.array(out) if out.ndim else float(out)

    eval = __call__

    def jumps_in(self, rect: Rect) -> list[JumpSegment]:
        return [s for s in self.jump_segments if s.intersects(rect)]
