"""Sample-based falsifiers for X2-calibration and its consequences.

All checkers return a :class:`~engel_normal.reports.ValidationReport`.  A clean
report means no counterexample was found on the sampled points, not that the
property is proved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..core import X2, X4, TangentVector, flow_many, zt_direction
from ..reports import ValidationReport
from ..tolerances import DEFAULT
from .functions import GraphFunction
from .specs import contains


@dataclass(frozen=True)
class Sampler:
    """Seeded random points in a box plus positive flow times.

    A fraction ``near_boundary`` of the points is lifted to just above the
    graph (``x2 = G + U(0, boundary_band)``) wherever ``G`` is finite, which is
    where monotonicity violations live.
    """

    n_points: int = 10_000
    low: float = -3.0
    high: float = 3.0
    n_times: int = 4
    t_max: float = 3.0
    near_boundary: float = 0.5
    boundary_band: float = 1e-3
    seed: int = 0

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def points(self, spec=None, salt: int = 0) -> np.ndarray:
        rng = self.rng(salt)
        pts = rng.uniform(self.low, self.high, size=(self.n_points, 4))
        if spec is not None and self.near_boundary > 0:
            k = int(round(self.near_boundary * self.n_points))
            g = np.asarray(spec.graph(pts[:k, 2], pts[:k, 3]), dtype=float)
            lift = g + rng.uniform(0.0, self.boundary_band, size=k)
            pts[:k, 1] = np.where(np.isfinite(g), lift, pts[:k, 1])
        return pts

    def times(self, n: int, salt: int = 1) -> np.ndarray:
        """Flow times in ``(0, t_max]``, log-uniform so short times are covered too."""
        rng = self.rng(salt)
        u = rng.uniform(-6.0, 0.0, size=(n, self.n_times))
        return self.t_max * 10.0**u


def _flow_invariance(spec, v, sampler: Sampler, name: str, margin: float) -> ValidationReport:
    rep = ValidationReport(name=name)
    pts = sampler.points(spec)
    inside = contains(spec, pts)
    base = pts[inside]
    times = sampler.times(base.shape[0])
    v = np.asarray(v, dtype=float)
    for j in range(times.shape[1]):
        t = times[:, j]
        img = flow_many(base, v, t)
        ok = contains(spec, img, margin=margin)
        rep.checked += int(base.shape[0])
        for i in np.nonzero(~ok)[0]:
            rep.add_violation(point=base[i], t=t[i], image=img[i], G_image=spec.graph(img[i, 2], img[i, 3]))
    rep.metrics["direction"] = v
    rep.metrics["points_in_E"] = int(base.shape[0])
    return rep


def check_X2_monotone(spec, sampler: Sampler = Sampler(), margin: float = DEFAULT.membership_margin) -> ValidationReport:
    """``p in E, t > 0  =>  p + (0, t, p1 t, p1**2 t / 2) in E`` on sampled ``(p, t)``."""
    return _flow_invariance(spec, X2, sampler, "X2-monotone", margin)


def check_monotone_direction(
    spec, v, sampler: Sampler = Sampler(), margin: float = DEFAULT.membership_margin
) -> ValidationReport:
    """``p in E, t > 0  =>  p exp(t v) in E`` on sampled ``(p, t)``."""
    v = TangentVector(*v)
    if v.is_zero():
        rep = ValidationReport(name=f"monotone{tuple(v)}")
        rep.checked = sampler.n_points
        rep.notes.append("zero direction: flow is the identity")
        return rep
    return _flow_invariance(spec, v, sampler, f"monotone{tuple(float(c) for c in v)}", margin)


def check_zt_family(
    spec, sampler: Sampler = Sampler(), ts=np.linspace(-3.0, 3.0, 13), margin: float = DEFAULT.membership_margin
) -> ValidationReport:
    """Monotonicity along every ``Z_t = X2 + t X3 + t**2/2 X4`` plus ``X4`` and ``X2 + 2 X3 + 2 X4``."""
    directions = [zt_direction(float(t)) for t in ts] + [X4, TangentVector(0.0, 1.0, 2.0, 2.0)]
    rep = ValidationReport(name="Zt-family")
    for k, v in enumerate(directions):
        sub = check_monotone_direction(spec, v, replace(sampler, seed=sampler.seed + 7919 * (k + 1)), margin)
        rep.checked += sub.checked
        rep.n_violations += sub.n_violations
        rep.violations.extend(sub.violations[: max(0, 20 - len(rep.violations))])
        rep.metrics[f"violations{tuple(round(float(c), 6) for c in v)}"] = sub.n_violations
    return rep


def check_jump_condition(G: GraphFunction, tol: float = DEFAULT.algebraic) -> ValidationReport:
    """Declared jumps must lie on lines ``x4 = const`` and drop as ``x4`` increases."""
    rep = ValidationReport(name="jump-condition")
    for seg in G.jump_segments:
        rep.checked += 1
        if not seg.is_horizontal(tol):
            rep.add_violation(reason="jump segment not parallel to the x3-axis", start=seg.start, end=seg.end)
        elif seg.value_below < seg.value_above - tol:
            rep.add_violation(
                reason="G increases across the jump in the x4 direction",
                start=seg.start,
                end=seg.end,
                value_below=seg.value_below,
                value_above=seg.value_above,
            )
    return rep


def sample_cone_interior(n: int, rng: np.random.Generator, scale: float = 2.0, min_gap: float = 1e-2) -> np.ndarray:
    """Points strictly inside ``C = {x4 > 0, x2 > x3**2 / (2 x4)}``."""
    c = np.empty((n, 4))
    c[:, 0] = rng.uniform(-scale, scale, n)
    c[:, 3] = rng.uniform(min_gap, scale, n)
    c[:, 2] = rng.uniform(-scale, scale, n)
    c[:, 1] = c[:, 2] ** 2 / (2 * c[:, 3]) + rng.uniform(min_gap, scale, n)
    return c


def cone_inclusion(
    spec,
    boundary_points,
    n_cone: int = 200,
    seed: int = 0,
    eps_boundary: float = 1e-6,
    margin: float = DEFAULT.membership_margin,
) -> ValidationReport:
    """For ``p`` on ``dE`` check ``p + c in E`` for sampled ``c`` in ``C`` (Euclidean translation)."""
    pts = np.atleast_2d(np.asarray(boundary_points, dtype=float))
    g = np.asarray(spec.graph(pts[:, 2], pts[:, 3]), dtype=float)
    off = ~(np.abs(pts[:, 1] - g) <= eps_boundary)
    if np.any(off):
        i = int(np.argmax(off))
        raise ValueError(f"point {pts[i].tolist()} is not within {eps_boundary} of the boundary")
    rng = np.random.default_rng(seed)
    rep = ValidationReport(name="cone-inclusion")
    cs = sample_cone_interior(n_cone, rng)
    for p in pts:
        img = p[None, :] + cs
        ok = contains(spec, img, margin=margin)
        rep.checked += n_cone
        for i in np.nonzero(~ok)[0]:
            rep.add_violation(point=p, c=cs[i])
    return rep


def check_partial_lipschitz(
    spec, sampler: Sampler = Sampler(), a_max: float = 5.0, eps: float = 1e-9
) -> ValidationReport:
    """``G(x3 + a t, x4 + a**2 t / 2) <= G(x3, x4) + t`` for ``a in [-a_max, a_max]``, ``t in (0, 1]``."""
    rng = sampler.rng(11)
    rep = ValidationReport(name="partial-lipschitz")
    x = rng.uniform(sampler.low, sampler.high, size=(sampler.n_points, 2))
    g0 = np.asarray(spec.graph(x[:, 0], x[:, 1]), dtype=float)
    keep = np.isfinite(g0)
    x, g0 = x[keep], g0[keep]
    a = rng.uniform(-a_max, a_max, size=x.shape[0])
    t = rng.uniform(0.0, 1.0, size=x.shape[0])
    t = np.where(t == 0.0, 1.0, t)
    g1 = np.asarray(spec.graph(x[:, 0] + a * t, x[:, 1] + a * a * t / 2), dtype=float)
    bad = g1 > g0 + t + eps
    rep.checked = int(x.shape[0])
    for i in np.nonzero(bad)[0]:
        rep.add_violation(x=x[i], a=a[i], t=t[i], G0=g0[i], G1=g1[i])
    return rep


def check_level_set(spec, sampler: Sampler = Sampler()) -> ValidationReport:
    """Once ``G = -inf`` at some ``x``, it stays ``-inf`` at every larger ``x4``.

    When the graph function declares ``b`` the check is exact against it;
    otherwise it compares all sampled pairs.
    """
    rep = ValidationReport(name="level-set")
    rng = sampler.rng(13)
    x = rng.uniform(sampler.low, sampler.high, size=(min(sampler.n_points, 2000), 2))
    g = np.asarray(spec.graph(x[:, 0], x[:, 1]), dtype=float)
    neg = g == -np.inf
    b = spec.graph.b
    rep.checked = int(x.shape[0])
    if not math.isnan(b):
        wrong = (x[:, 1] > b) & ~neg | (x[:, 1] < b) & neg
        for i in np.nonzero(wrong)[0]:
            rep.add_violation(x=x[i], G=g[i], b=b)
        rep.metrics["b"] = b
        return rep
    if np.any(neg):
        lowest = x[neg, 1].min()
        wrong = (x[:, 1] > lowest) & ~neg
        for i in np.nonzero(wrong)[0]:
            rep.add_violation(x=x[i], G=g[i], first_minus_inf_x4=lowest)
    return rep


def check_upper_semicontinuity(
    G: GraphFunction, points, radius: float = 1e-3, n_dirs: int = 16, tol: float = 1e-9
) -> ValidationReport:
    """Compare ``G(x)`` with the sup of ``G`` on three shrinking disks.

    A point is flagged when the excess of the neighbourhood sup over ``G(x)``
    is above ``tol`` at the smallest radius and has not shrunk to less than
    half of its value at the largest radius.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rep = ValidationReport(name="upper-semicontinuity", checked=int(pts.shape[0]))
    centre = np.asarray(G(pts[:, 0], pts[:, 1]), dtype=float)
    ang = np.linspace(0, 2 * np.pi, n_dirs, endpoint=False)
    ring = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    excess = []
    for k in range(3):
        r = radius / 2**k
        offs = np.concatenate([ring * r, ring * r / 2])
        nb = np.asarray(G(pts[:, None, 0] + offs[None, :, 0], pts[:, None, 1] + offs[None, :, 1]), dtype=float)
        with np.errstate(invalid="ignore"):
            excess.append(np.where(centre == np.inf, -np.inf, nb.max(axis=1) - centre))
    with np.errstate(invalid="ignore"):
        bad = (excess[2] > tol) & ~(excess[2] <= 0.5 * excess[0])
    for i in np.nonzero(bad)[0]:
        rep.add_violation(x=pts[i], G=centre[i], excess=excess[2][i])
    return rep
