"""Constructible families of X2-calibrated sets ``E = {x2 > G(x3, x4)}``.

Each spec knows how to build its graph function and how to sample-check its
own admissibility conditions.  Specs are immutable; invalid parameters are
accepted (so falsifiers can be exercised) and show up in :meth:`check`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .._bisect import threshold_bisect
from ..core import Point
from ..reports import ValidationReport
from ..tolerances import DEFAULT
from .functions import GraphFunction, JumpSegment, PiecewiseLinear

ScalarFunction = Union[PiecewiseLinear, Callable[[np.ndarray], np.ndarray]]

_PROBE = np.linspace(-10.0, 10.0, 4001)


def _is_non_increasing(fn: ScalarFunction, tol: float = 1e-12) -> tuple[bool, float | None]:
    if isinstance(fn, PiecewiseLinear):
        return fn.is_non_increasing(), None
    vals = np.asarray(fn(_PROBE), dtype=float)
    bad = np.nonzero(np.diff(vals) > tol)[0]
    return bad.size == 0, (float(_PROBE[bad[0]]) if bad.size else None)


def _is_non_decreasing(fn: ScalarFunction, tol: float = 1e-12) -> tuple[bool, float | None]:
    if isinstance(fn, PiecewiseLinear):
        return fn.is_non_decreasing(), None
    vals = np.asarray(fn(_PROBE), dtype=float)
    bad = np.nonzero(np.diff(vals) < -tol)[0]
    return bad.size == 0, (float(_PROBE[bad[0]]) if bad.size else None)


def _lipschitz(fn: ScalarFunction) -> float:
    if isinstance(fn, PiecewiseLinear):
        return fn.lipschitz_constant()
    vals = np.asarray(fn(_PROBE), dtype=float)
    return float(np.max(np.abs(np.diff(vals)) / np.diff(_PROBE)))


def _usc_1d(fn: ScalarFunction, radius: float = 1e-3, tol: float = 1e-9) -> tuple[bool, float | None]:
    """Upper semi-continuity probed with three dyadic radii."""
    if isinstance(fn, PiecewiseLinear):
        return True, None  # jumps take the larger one-sided value by construction
    x = _PROBE[::10]
    centre = np.asarray(fn(x), dtype=float)
    excess = []
    for k in range(3):
        r = radius / 2**k
        offsets = np.array([-r, -r / 2, r / 2, r])
        nb = np.asarray(fn(x[:, None] + offsets[None, :]), dtype=float).max(axis=1)
        excess.append(nb - centre)
    bad = (excess[2] > tol) & (excess[2] > 0.5 * excess[0])
    idx = np.nonzero(bad)[0]
    return idx.size == 0, (float(x[idx[0]]) if idx.size else None)


def _profile_jumps(fn: ScalarFunction) -> tuple[JumpSegment, ...]:
    if not isinstance(fn, PiecewiseLinear):
        return ()
    return tuple(JumpSegment.horizontal(loc, left, right) for loc, left, right in fn.jumps)


class _Spec:
    variant: str = ""

    @cached_property
    def graph(self) -> GraphFunction:
        return self._build_graph()

    def G(self, x3, x4):
        return self.graph(x3, x4)

    def contains(self, p, margin: float = 0.0):
        return contains(self, p, margin=margin)

    def check(self) -> ValidationReport:
        return ValidationReport(name=f"{self.variant}-admissibility", checked=1)


@dataclass(frozen=True, eq=False)
class HalfSpace(_Spec):
    """``{x : normal . x > offset}`` with ``normal[0] == 0`` (X1-invariance)."""

    normal: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 0.0)
    offset: float = 0.0
    variant = "halfspace"

    def __post_init__(self):
        n = tuple(float(c) for c in self.normal)
        if len(n) != 4:
            raise ValueError("normal must have four components")
        if n[0] != 0.0:
            raise ValueError("a half-space with normal[0] != 0 is not X1-invariant")
        if n[1] < 0.0:
            raise ValueError("normal[1] < 0 does not describe an upper-graph in x2")
        if n[1] == 0.0 and n[2] == 0.0 and n[3] == 0.0:
            raise ValueError("normal must be non-zero")
        object.__setattr__(self, "normal", n)

    def _build_graph(self) -> GraphFunction:
        _, n2, n3, n4 = self.normal
        c = self.offset
        if n2 > 0:
            return GraphFunction(lambda x3, x4: (c - n3 * x3 - n4 * x4) / n2, name="affine")
        b = c / n4 if (n3 == 0.0 and n4 > 0) else None

        def vertical(x3, x4):
            return np.where(n3 * x3 + n4 * x4 > c, -np.inf, np.inf)

        return GraphFunction(vertical, b=b if b is not None else math.nan, name="vertical")

    def check(self) -> ValidationReport:
        rep = ValidationReport(name="halfspace-admissibility", checked=1)
        _, n2, n3, n4 = self.normal
        if n2 > 0:
            # affine G: (dG/dx3)^2 + 2 dG/dx4 = (n3^2 - 2 n2 n4) / n2^2
            if n3 * n3 > 2 * n2 * n4:
                rep.add_violation(reason="n3^2 > 2 n2 n4", normal=self.normal)
        elif not (n3 == 0.0 and n4 > 0):
            rep.add_violation(reason="vertical half-space must be {x4 > b}", normal=self.normal)
        return rep


@dataclass(frozen=True, eq=False)
class MonotoneG(_Spec):
    """``{x2 > g(x4)}`` with ``g`` non-increasing and upper semi-continuous."""

    g: ScalarFunction
    variant = "monotone"

    def _build_graph(self) -> GraphFunction:
        g = self.g
        return GraphFunction(
            lambda x3, x4: np.asarray(g(x4), dtype=float) + 0.0 * x3,
            jump_segments=_profile_jumps(g),
            name="g(x4)",
        )

    def check(self) -> ValidationReport:
        rep = ValidationReport(name="monotone-admissibility", checked=2)
        ok, where = _is_non_increasing(self.g)
        if not ok:
            rep.add_violation(reason="g is not non-increasing", at=where)
        ok, where = _usc_1d(self.g)
        if not ok:
            rep.add_violation(reason="g is not upper semi-continuous", at=where)
        return rep


@dataclass(frozen=True, eq=False)
class FGK(_Spec):
    """``{x2 > f(K x3 - x4) + g(x4)}``.

    Admissible when ``K > 0``, ``f`` is non-decreasing with Lipschitz
    constant at most ``2 / K**2`` and ``g`` is non-increasing and u.s.c.
    """

    f: ScalarFunction
    g: ScalarFunction
    K: float
    variant = "fgk"

    def _build_graph(self) -> GraphFunction:
        f, g, K = self.f, self.g, float(self.K)
        segments = list(_profile_jumps(g))
        if isinstance(f, PiecewiseLinear):
            # a jump of f at u0 sits on the oblique line x4 = K x3 - u0
            span = 1e6
            for u0, left, right in f.jumps:
                segments.append(
                    JumpSegment((-span, -K * span - u0), (span, K * span - u0), value_below=right, value_above=left)
                )
        return GraphFunction(
            lambda x3, x4: np.asarray(f(K * x3 - x4), dtype=float) + np.asarray(g(x4), dtype=float),
            jump_segments=tuple(segments),
            name="f(Kx3-x4)+g(x4)",
        )

    def check(self) -> ValidationReport:
        rep = ValidationReport(name="fgk-admissibility", checked=5)
        if not self.K > 0:
            rep.add_violation(reason="K must be positive", K=self.K)
            return rep
        ok, where = _is_non_decreasing(self.f)
        if not ok:
            rep.add_violation(reason="f is not non-decreasing", at=where)
        lip = _lipschitz(self.f)
        bound = 2.0 / self.K**2
        rep.metrics["f_lipschitz"] = lip
        rep.metrics["f_lipschitz_bound"] = bound
        if lip > bound * (1 + 1e-12):
            rep.add_violation(reason="Lip(f) > 2/K^2", lipschitz=lip, bound=bound)
        ok, where = _is_non_increasing(self.g)
        if not ok:
            rep.add_violation(reason="g is not non-increasing", at=where)
        ok, where = _usc_1d(self.g)
        if not ok:
            rep.add_violation(reason="g is not upper semi-continuous", at=where)
        return rep


def cone_graph(x3, x4):
    """``x3**2 / (2 x4)`` for ``x4 > 0`` and ``+inf`` elsewhere."""
    x3 = np.asarray(x3, dtype=float)
    x4 = np.asarray(x4, dtype=float)
    pos = x4 > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = x3 * x3 / (2.0 * np.where(pos, x4, 1.0))
    return np.where(pos, val, np.inf)


@dataclass(frozen=True, eq=False)
class Cone(_Spec):
    """The extremal set ``C = {x2 > 0, x4 > 0, x2 > x3**2 / (2 x4)}``."""

    variant = "cone"

    def _build_graph(self) -> GraphFunction:
        return GraphFunction(cone_graph, name="cone")


@dataclass(frozen=True, eq=False)
class CustomG(_Spec):
    graph_function: GraphFunction = field(default=None)
    variant = "custom"

    def _build_graph(self) -> GraphFunction:
        if self.graph_function is None:
            raise ValueError("CustomG needs a graph function")
        return self.graph_function

    def check(self) -> ValidationReport:
        from .checks import check_jump_condition

        rep = check_jump_condition(self.graph)
        rep.name = "custom-admissibility"
        return rep


CalibratedSetSpec = Union[HalfSpace, MonotoneG, FGK, Cone, CustomG]


def contains(spec, p, margin: float = 0.0):
    """Membership ``p2 + margin > G(p3, p4)``; ``p1`` is ignored.

    ``p`` is a single point or an array of shape ``(n, 4)``.  With the
    default ``margin = 0`` this is exactly the set ``E``; a positive margin
    absorbs rounding when checking images of points that lie on ``dE``.
    """
    arr = np.asarray(p, dtype=float)
    g = spec.graph(arr[..., 2], arr[..., 3])
    out = arr[..., 1] + margin > g
    return bool(out) if np.ndim(out) == 0 else out


def boundary_points(
    spec,
    base,
    bracket: tuple[float, float] = (-1e6, 1e6),
    tol: float = DEFAULT.bisect,
) -> np.ndarray:
    """Points of ``dE`` above ``(p1, *, p3, p4)`` located by bisection along X2.

    ``base`` has shape ``(n, 3)`` with columns ``p1, p3, p4``.  The X2 flow from
    ``(0, 0, p3, p4)`` only moves ``x2``, and X1-invariance lets ``p1`` be set
    afterwards.  Rows whose line misses ``dE`` inside the bracket come back
    with ``x2 = +/-inf``.
    """
    base = np.atleast_2d(np.asarray(base, dtype=float))
    n = base.shape[0]
    pts = np.zeros((n, 4))
    pts[:, 2] = base[:, 1]
    pts[:, 3] = base[:, 2]

    def member(t):
        q = pts.copy()
        q[:, 1] = t
        return contains(spec, q)

    height = threshold_bisect(member, np.full(n, bracket[0]), np.full(n, bracket[1]), tol)
    out = pts.copy()
    out[:, 0] = base[:, 0]
    out[:, 1] = height
    return out


def boundary_point(spec, p1: float, p3: float, p4: float, **kw) -> Point | None:
    row = boundary_points(spec, [[p1, p3, p4]], **kw)[0]
    if not math.isfinite(row[1]):
        return None
    return Point(*row)
