"""Intrinsic graphs over ``W = {x2 = 0}`` along horizontal directions ``a X1 + X2``.

For a calibrated set ``E`` and ``p`` in ``W`` the hitting set of the flow line
``t -> p exp(t (a X1 + X2))`` is a half-line ``(T(p), +inf)``.  This module
computes ``T`` by bisection and, for the cone, in closed form via the quartic

    Q(t) = a**2 t**4 / 12 - p3 a t**2 + 2 p4 t - p3**2 > 0,   p4 + a**2 t**3 / 6 > 0,

and uses it to probe regularity: jumps of ``T``, the ``|p4|**(1/3)`` growth
that rules out Lipschitz continuity, and Hoelder-type bounds
``T <= K max(sqrt|p3|, cbrt|p4|)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from ._bisect import threshold_bisect
from .calibrated.functions import PiecewiseLinear
from .calibrated.specs import Cone, MonotoneG, contains
from .core import Point, flow_many, multiply_many
from .reports import ValidationReport
from .tolerances import DEFAULT


class NonMonotoneMembership(ValueError):
    """Membership along a flow line is not of the form ``t > T``."""


@dataclass(frozen=True)
class IntrinsicGraphQuery:
    spec: object
    a: float
    p: Point

    def __post_init__(self):
        p = Point(*(float(c) for c in self.p))
        if p.x2 != 0.0:
            raise ValueError(f"base point must lie in W = {{x2 = 0}}, got x2 = {p.x2}")
        object.__setattr__(self, "p", p)


def _direction(a: float) -> np.ndarray:
    return np.array([a, 1.0, 0.0, 0.0])


# log-spaced probe times on both sides of 0 used to detect non-monotone membership
_PATTERN = np.concatenate([-np.logspace(6, -6, 49), [0.0], np.logspace(-6, 6, 49)])


def _check_half_line(spec, base: np.ndarray, a: float) -> None:
    v = _direction(a)
    rows = np.repeat(base, _PATTERN.size, axis=0)
    t = np.tile(_PATTERN, base.shape[0])
    inside = contains(spec, flow_many(rows, v, t)).reshape(base.shape[0], _PATTERN.size)
    # once inside, always inside: no True followed by False
    drops = inside[:, :-1] & ~inside[:, 1:]
    if np.any(drops):
        i, j = np.argwhere(drops)[0]
        raise NonMonotoneMembership(
            f"flow line from {base[i].tolist()} leaves E between t={_PATTERN[j]:g} and t={_PATTERN[j + 1]:g}"
        )


def intrinsic_T_many(
    spec,
    a: float,
    base,
    bracket: tuple[float, float] = (-1e6, 1e6),
    tol: float = DEFAULT.bisect,
    check_monotone: bool = True,
    max_doublings: int = 4,
) -> np.ndarray:
    """``T`` at each row of ``base`` (shape ``(n, 4)`` with column 1 zero)."""
    base = np.atleast_2d(np.asarray(base, dtype=float))
    if base.shape[1] != 4:
        raise ValueError("base points need four coordinates")
    if np.any(base[:, 1] != 0.0):
        raise ValueError("base points must lie in W = {x2 = 0}")
    if not bracket[1] > bracket[0]:
        raise ValueError("need t_hi > t_lo")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if check_monotone:
        _check_half_line(spec, base, a)
    v = _direction(a)

    def member(t):
        return contains(spec, flow_many(base, v, t))

    lo, hi = float(bracket[0]), float(bracket[1])
    # doubling escape: widen the bracket a few times before giving up
    for _ in range(max_doublings):
        need_hi = not np.all(member(np.full(base.shape[0], hi)))
        need_lo = np.any(member(np.full(base.shape[0], lo)))
        if not (need_hi or need_lo):
            break
        hi = hi * 2 if need_hi else hi
        lo = lo * 2 if need_lo else lo
    return threshold_bisect(member, np.full(base.shape[0], lo), np.full(base.shape[0], hi), tol)


def intrinsic_T(q: IntrinsicGraphQuery, bracket=(-1e6, 1e6), tol: float = DEFAULT.bisect, **kw) -> float:
    """``inf{t : p exp(t (a X1 + X2)) in E}``; ``-inf`` / ``+inf`` when the bracket cannot separate."""
    return float(intrinsic_T_many(q.spec, q.a, [tuple(q.p)], bracket, tol, **kw)[0])


def _cone_inside(a, p3, p4, t):
    q = a * a * t**4 / 12 - p3 * a * t * t + 2 * p4 * t - p3 * p3
    return (t > 0) & (q > 0) & (p4 + a * a * t**3 / 6 > 0)


def cone_T_closed_form(a: float, p3: float, p4: float, polish: bool = True) -> float:
    """Smallest ``t >= 0`` with ``Q(t) > 0`` and ``p4 + a**2 t**3 / 6 > 0`` for the cone.

    The positive real parts of the quartic's companion-matrix eigenvalues and
    the constraint root ``cbrt(-6 p4 / a**2)`` cut ``[0, inf)`` into
    intervals; the answer is the left end of the first interval whose
    midpoint is inside.  Spurious breakpoints only refine the partition, so
    near-double roots are harmless.
    """
    if a == 0:
        raise ValueError("a must be non-zero")
    a, p3, p4 = float(a), float(p3), float(p4)
    coeffs = [-p3 * p3, 2 * p4, -p3 * a, 0.0, a * a / 12]  # increasing degree
    roots = np.polynomial.polynomial.polyroots(coeffs)
    cuts = {0.0}
    cuts.update(float(r.real) for r in roots if r.real > 0)
    tc = float(np.cbrt(-6 * p4 / (a * a)))
    if tc > 0:
        cuts.add(tc)
    cuts = sorted(cuts)
    ends = cuts + [cuts[-1] * 2 + 1.0]
    for left, right in zip(ends[:-1], ends[1:]):
        if _cone_inside(a, p3, p4, 0.5 * (left + right)):
            break
    else:  # pragma: no cover - the quartic is positive for large t
        raise RuntimeError("no admissible interval found")
    t = left
    if polish and t > 0 and t != tc:
        for _ in range(3):
            q = a * a * t**4 / 12 - p3 * a * t * t + 2 * p4 * t - p3 * p3
            dq = a * a * t**3 / 3 - 2 * p3 * a * t + 2 * p4
            if dq == 0:
                break
            t -= q / dq
    return t


def cone_T_many(a: float, p3, p4) -> np.ndarray:
    p3, p4 = np.broadcast_arrays(np.asarray(p3, dtype=float), np.asarray(p4, dtype=float))
    return np.vectorize(lambda u, v: cone_T_closed_form(a, u, v))(p3, p4).astype(float)


def holder_profile(p3, p4):
    """``max(sqrt|p3|, cbrt|p4|)``, the homogeneous gauge on ``W``."""
    return np.maximum(np.sqrt(np.abs(p3)), np.cbrt(np.abs(p4)))


# -- discontinuity ----------------------------------------------------------


@dataclass(frozen=True)
class Jump:
    location: float
    left_limit: float
    right_limit: float

    @property
    def size(self) -> float:
        return self.left_limit - self.right_limit


@dataclass
class DiscontinuityReport:
    jumps: list[Jump]
    p4: np.ndarray
    T: np.ndarray
    resolution: float
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "jumps": [{"location": j.location, "left": j.left_limit, "right": j.right_limit, "size": j.size} for j in self.jumps],
            "grid_points": int(self.p4.size),
            "resolution": self.resolution,
            "notes": self.notes,
        }


def demonstrate_discontinuity(
    g_step,
    p4_range: tuple[float, float] = (-2.0, 2.0),
    n: int = 4001,
    min_jump: float = 1e-6,
    tol: float = DEFAULT.bisect,
) -> DiscontinuityReport:
    """Jumps of ``T`` on ``W`` along ``X2`` (``a = 0``) at ``p1 = p3 = 0``, where ``T(p) = g(p4)``.

    Candidate intervals come from grid differences; each is narrowed by
    bisection on ``p4`` (keeping the half with the larger change) until it is
    shorter than ``1e-10``.  A change that survives the narrowing is a jump.
    """
    spec = g_step if isinstance(g_step, MonotoneG) else MonotoneG(g_step)
    if isinstance(spec.g, PiecewiseLinear) and not spec.g.is_non_increasing():
        raise ValueError("g must be non-increasing")

    def T_at(p4):
        p4 = np.atleast_1d(np.asarray(p4, dtype=float))
        base = np.zeros((p4.size, 4))
        base[:, 3] = p4
        return intrinsic_T_many(spec, 0.0, base, tol=tol, check_monotone=False)

    grid = np.linspace(p4_range[0], p4_range[1], n)
    T = T_at(grid)
    finite = np.isfinite(T)
    diffs = np.abs(np.diff(T))
    h = grid[1] - grid[0]
    base_level = np.median(diffs[np.isfinite(diffs)]) if np.any(np.isfinite(diffs)) else 0.0
    candidates = np.nonzero((diffs > max(min_jump, 10 * base_level)) | (finite[:-1] != finite[1:]))[0]
    jumps = []
    for i in candidates:
        lo, hi = grid[i], grid[i + 1]
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            tl, tm, th = T_at([lo, mid, hi])
            if abs(tm - tl) >= abs(th - tm):
                hi = mid
            else:
                lo = mid
        tl, th = T_at([lo, hi])
        if abs(tl - th) > min_jump:
            jumps.append(Jump(float(0.5 * (lo + hi)), float(tl), float(th)))
    rep = DiscontinuityReport(jumps=jumps, p4=grid, T=T, resolution=float(h))
    if not jumps:
        rep.notes.append("no jump found")
    return rep


# -- growth exponent --------------------------------------------------------


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    prefactor: float
    residual: float
    p4: np.ndarray
    T: np.ndarray

    def to_dict(self) -> dict:
        return {"slope": self.slope, "prefactor": self.prefactor, "residual": self.residual, "points": int(self.p4.size)}


def lipschitz_blowup_exponent(a: float, p4_sequence, spec=None, tol: float = DEFAULT.bisect) -> ExponentFit:
    """Least-squares slope of ``log T(0, 0, 0, p4)`` against ``log |p4|``.

    For the cone the slope is ``1/3`` with prefactor ``cbrt(24 / a**2)``, so
    ``T / |p4|`` grows like ``|p4|**(-2/3)`` as ``p4 -> 0``.
    """
    if a == 0:
        raise ValueError("a must be non-zero")
    p4 = np.asarray(p4_sequence, dtype=float)
    if p4.ndim != 1 or p4.size < 2:
        raise ValueError("need at least two values of p4")
    if np.any(p4 >= 0):
        raise ValueError("p4 values must be negative")
    if np.unique(p4).size < 2:
        raise ValueError("degenerate sequence: all p4 values coincide")
    spec = Cone() if spec is None else spec
    base = np.zeros((p4.size, 4))
    base[:, 3] = p4
    T = intrinsic_T_many(spec, a, base, tol=tol)
    if np.any(~np.isfinite(T) | (T <= 0)):
        raise ValueError("T must be positive and finite along the sequence")
    x, y = np.log(np.abs(p4)), np.log(T)
    slope, icept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((slope * x + icept - y) ** 2)))
    return ExponentFit(float(slope), float(np.exp(icept)), resid, p4, T)


# -- Hoelder bound ----------------------------------------------------------


def holder_constant(a: float, n_grid: int = 2001) -> tuple[float, tuple[float, float]]:
    """``K*(a) = sup T / max(sqrt|p3|, cbrt|p4|)`` for the cone, with its maximiser.

    ``T(l**2 p3, l**3 p4) = l T(p3, p4)`` for ``l > 0``, so the sup is a max
    over the unit gauge sphere, whose four edges are ``|p3| = 1, |p4| <= 1``
    and ``|p4| = 1, |p3| <= 1``.  A dense grid locates the maximum, and a
    bounded scalar search refines it.
    """
    if a == 0:
        raise ValueError("a must be non-zero")
    edges = [
        lambda s: (1.0, s),
        lambda s: (-1.0, s),
        lambda s: (s, 1.0),
        lambda s: (s, -1.0),
    ]
    s = np.linspace(-1.0, 1.0, n_grid)
    best, arg = -np.inf, (0.0, 0.0)
    for edge in edges:
        vals = np.array([cone_T_closed_form(a, *edge(x)) for x in s])
        k = int(np.argmax(vals))
        lo, hi = s[max(k - 1, 0)], s[min(k + 1, n_grid - 1)]
        cand = [(vals[k], s[k])]
        if hi > lo:
            r = minimize_scalar(lambda x: -cone_T_closed_form(a, *edge(x)), bounds=(lo, hi), method="bounded",
                                options={"xatol": 1e-13})
            cand.append((-r.fun, r.x))
        v, x = max(cand)
        if v > best:
            best, arg = v, edge(x)
    return float(best), (float(arg[0]), float(arg[1]))


def holder_bound_check(
    spec,
    a: float,
    K: float,
    sample,
    tol: float = DEFAULT.bisect,
) -> ValidationReport:
    """``T(0, 0, p3, p4) <= K max(sqrt|p3|, cbrt|p4|) + tol`` at every sampled ``(p3, p4)``."""
    if a == 0:
        raise ValueError("a must be non-zero")
    if not K > 0:
        raise ValueError("K must be positive")
    pts = np.atleast_2d(np.asarray(sample, dtype=float))
    base = np.zeros((pts.shape[0], 4))
    base[:, 2:] = pts
    T = intrinsic_T_many(spec, a, base, tol=tol)
    bound = K * holder_profile(pts[:, 0], pts[:, 1])
    rep = ValidationReport(name="holder-bound", checked=int(pts.shape[0]))
    bad = T > bound + tol
    for i in np.nonzero(bad)[0]:
        rep.add_violation(p3=pts[i, 0], p4=pts[i, 1], T=T[i], bound=bound[i])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(bound > 0, T / np.where(bound > 0, bound, 1.0) * K, np.nan)
    if np.any(np.isfinite(ratio)):
        rep.metrics["max_T_over_gauge"] = float(np.nanmax(ratio))
    rep.metrics["K"] = K
    rep.metrics["a"] = a
    return rep


# -- intrinsic cone test ----------------------------------------------------


def intrinsic_cone_test(
    spec,
    a: float,
    boundary_points,
    K: float | None = None,
    n_samples: int = 500,
    seed: int = 0,
    scale: float = 1.0,
    margin: float = DEFAULT.membership_margin,
) -> ValidationReport:
    """Double-cone criterion for intrinsic Lipschitz continuity at boundary points.

    For ``w = (0, 0, w3, w4)`` and ``m(w) = max(sqrt|w3|, cbrt|w4|)`` the points
    ``p w exp(t (a X1 + X2))`` must lie in ``E`` for ``t > K m(w)`` and outside
    ``E`` for ``t < -K m(w)``.  ``K`` defaults to the cone constant ``K*(a)``.
    """
    if a == 0:
        raise ValueError("a must be non-zero")
    K = holder_constant(a)[0] if K is None else float(K)
    rng = np.random.default_rng(seed)
    pts = np.atleast_2d(np.asarray(boundary_points, dtype=float))
    w = np.zeros((n_samples, 4))
    w[:, 2] = rng.uniform(-scale, scale, n_samples)
    w[:, 3] = rng.uniform(-scale, scale, n_samples)
    gap = 10.0 ** rng.uniform(-6, np.log10(2.0), n_samples)
    t = K * holder_profile(w[:, 2], w[:, 3]) + gap
    v = _direction(a)
    up = flow_many(w, v, t)
    down = flow_many(w, v, -t)
    rep = ValidationReport(name="intrinsic-cone")
    for p in pts:
        pp = np.broadcast_to(p, up.shape)
        above = contains(spec, multiply_many(pp, up), margin=-margin)
        below = contains(spec, multiply_many(pp, down), margin=margin)
        rep.checked += 2 * n_samples
        for i in np.nonzero(~above)[0]:
            rep.add_violation(side="above", p=p, w=w[i, 2:], t=t[i])
        for i in np.nonzero(below)[0]:
            rep.add_violation(side="below", p=p, w=w[i, 2:], t=-t[i])
    rep.metrics["K"] = K
    return rep


# -- export -----------------------------------------------------------------


def _num(x: float) -> str:
    return repr(float(x))


def write_T_csv(path, p3, p4, T, a) -> None:
    """Columns ``p3, p4, T, direction_a``; floats in shortest round-trip form.

    ``a`` is a scalar or one value per row.
    """
    p3, p4, T, a = np.broadcast_arrays(*(np.ravel(x) for x in (p3, p4, T, a)))
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["p3", "p4", "T", "direction_a"])
        for row in zip(p3, p4, T, a):
            wr.writerow([_num(c) for c in row])
