"""The partial differential inequality ``(d3 G)**2 + 2 d4 G <= 0``.

Two checks are provided: a pointwise one with Richardson-extrapolated central
differences for smooth pieces of ``G``, and the distributional form tested
against polynomial bump functions

    (int G dh/dx3)**2 <= 2 (int G dh/dx4) (int h)

which also covers kinks and jumps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..reports import ValidationReport
from ..tolerances import DEFAULT
from .functions import GraphFunction, Rect


class RegionContainsJump(ValueError):
    pass


class RegionContainsInfinite(ValueError):
    pass


class SupportEscapesDomain(ValueError):
    """A bump support reaches the region where ``G`` is infinite."""


def _richardson(G, x3, x4, axis: int, h: float):
    def central(step):
        if axis == 0:
            return (G(x3 + step, x4) - G(x3 - step, x4)) / (2 * step)
        return (G(x3, x4 + step) - G(x3, x4 - step)) / (2 * step)

    d1, d2, d4 = central(h), central(h / 2), central(h / 4)
    coarse = (4 * d2 - d1) / 3
    fine = (4 * d4 - d2) / 3
    return fine, np.abs(fine - coarse)


def pdi_pointwise(
    G: GraphFunction,
    region: Rect,
    step: float = DEFAULT.fd_step,
    n: int = 101,
    tol: float = DEFAULT.pdi,
    smooth_tol: float = 1e-6,
) -> ValidationReport:
    """Max over an ``n x n`` grid of ``(d3 G)**2 + 2 d4 G``; passes iff it is ``<= tol``.

    Derivatives are Richardson-extrapolated central differences.  Grid points
    where the extrapolated estimates at ``step`` and ``step / 2`` disagree by
    more than ``smooth_tol`` sit next to a kink; they are counted in
    ``metrics["nonsmooth_points"]`` and left out of the maximum.
    """
    hits = G.jumps_in(region)
    if hits:
        raise RegionContainsJump(f"{len(hits)} declared jump segment(s) intersect {region}")
    x3lo, x3hi, x4lo, x4hi = region
    a, b = np.meshgrid(np.linspace(x3lo, x3hi, n), np.linspace(x4lo, x4hi, n), indexing="ij")
    a, b = a.ravel(), b.ravel()
    probe = [G(a, b)]
    for s in (step, step / 2, step / 4):
        probe += [G(a + s, b), G(a - s, b), G(a, b + s), G(a, b - s)]
    if not all(np.all(np.isfinite(v)) for v in probe):
        raise RegionContainsInfinite(f"G is infinite somewhere in {region}")

    d3, e3 = _richardson(G, a, b, 0, step)
    d4, e4 = _richardson(G, a, b, 1, step)
    residual = d3 * d3 + 2 * d4
    smooth = (e3 <= smooth_tol) & (e4 <= smooth_tol)

    rep = ValidationReport(name="pdi-pointwise", checked=int(smooth.sum()))
    rep.metrics["nonsmooth_points"] = int((~smooth).sum())
    if np.any(smooth):
        r = residual[smooth]
        k = int(np.argmax(r))
        rep.metrics["max_residual"] = float(r[k])
        rep.metrics["argmax"] = (float(a[smooth][k]), float(b[smooth][k]))
        rep.metrics["min_residual"] = float(r.min())
        rep.metrics["max_abs_residual"] = float(np.abs(r).max())
        for i in np.nonzero(smooth & (residual > tol))[0]:
            rep.add_violation(x3=a[i], x4=b[i], residual=residual[i], d3G=d3[i], d4G=d4[i])
    else:
        rep.skipped = True
        rep.notes.append("no smooth grid point in region")
    return rep


@dataclass(frozen=True)
class TestFunctionFamily:
    """Bumps ``h(x) = A (1 - |x - c|**2 / r**2)**m`` on disks, with unit integral.

    ``A = (m + 1) / (pi r**2)``; ``h`` is ``C^(m-1)`` across the circle.
    """

    __test__ = False  # not a pytest class

    centers: np.ndarray
    radii: np.ndarray
    degree: int = 4

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.centers, dtype=float))
        r = np.broadcast_to(np.asarray(self.radii, dtype=float), (c.shape[0],)).copy()
        if np.any(r <= 0):
            raise ValueError("radii must be positive")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    def __len__(self) -> int:
        return self.centers.shape[0]

    @classmethod
    def grid(cls, region: Rect, n: int, radius: float, degree: int = 4) -> "TestFunctionFamily":
        x3lo, x3hi, x4lo, x4hi = region
        a, b = np.meshgrid(
            np.linspace(x3lo + radius, x3hi - radius, n), np.linspace(x4lo + radius, x4hi - radius, n), indexing="ij"
        )
        return cls(np.stack([a.ravel(), b.ravel()], axis=1), np.full(a.size, radius), degree)

    @classmethod
    def random(cls, region: Rect, n: int, radius_range=(0.05, 0.5), seed: int = 0, degree: int = 4):
        rng = np.random.default_rng(seed)
        r = rng.uniform(*radius_range, size=n)
        x3lo, x3hi, x4lo, x4hi = region
        c3 = rng.uniform(x3lo + r, x3hi - r)
        c4 = rng.uniform(x4lo + r, x4hi - r)
        return cls(np.stack([c3, c4], axis=1), r, degree)

    def evaluate(self, i: int, x3, x4):
        """``(h, dh/dx3, dh/dx4)`` of bump ``i`` at the given points."""
        m = self.degree
        c3, c4 = self.centers[i]
        r = self.radii[i]
        d3, d4 = x3 - c3, x4 - c4
        base = np.clip(1.0 - (d3 * d3 + d4 * d4) / (r * r), 0.0, None)
        amp = (m + 1) / (np.pi * r * r)
        h = amp * base**m
        coef = -2.0 * amp * m * base ** (m - 1) / (r * r)
        return h, coef * d3, coef * d4

    def nodes(self, i: int, order: int = 32):
        """Tensor Gauss-Legendre nodes and weights on the bounding box of bump ``i``."""
        x, w = np.polynomial.legendre.leggauss(order)
        c3, c4 = self.centers[i]
        r = self.radii[i]
        a, b = np.meshgrid(c3 + r * x, c4 + r * x, indexing="ij")
        return a, b, np.outer(w, w) * r * r

    def admissible(self, G: GraphFunction, order: int = 32) -> "TestFunctionFamily":
        """Sub-family whose supports stay where ``G`` is finite."""
        keep = [i for i in range(len(self)) if _support_finite(self, i, G, order)]
        return TestFunctionFamily(self.centers[keep], self.radii[keep], self.degree)


def _support_finite(fam: TestFunctionFamily, i: int, G: GraphFunction, order: int) -> bool:
    a, b, _ = fam.nodes(i, order)
    c3, c4 = fam.centers[i]
    r = fam.radii[i]
    ang = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    rim = G(c3 + r * np.cos(ang), c4 + r * np.sin(ang))
    if c4 + r >= G.b:
        return False
    return bool(np.all(np.isfinite(G(a, b))) and np.all(np.isfinite(rim)))


def pdi_distributional(
    G: GraphFunction,
    family: TestFunctionFamily,
    order: int = 32,
    tol: float = DEFAULT.quad,
) -> ValidationReport:
    """Check ``I3**2 <= 2 I4 M + tol`` for every bump, where ``I3 = int G dh/dx3``,
    ``I4 = int G dh/dx4`` and ``M = int h`` (all by tensor Gauss-Legendre)."""
    rep = ValidationReport(name="pdi-distributional")
    worst = -np.inf
    for i in range(len(family)):
        a, b, w = family.nodes(i, order)
        g = G(a, b)
        if not np.all(np.isfinite(g)) or not _support_finite(family, i, G, order):
            raise SupportEscapesDomain(f"bump {i} at {family.centers[i].tolist()} touches an infinite value of G")
        h, h3, h4 = family.evaluate(i, a, b)
        mass = float(np.sum(w * h))
        i3 = float(np.sum(w * g * h3))
        i4 = float(np.sum(w * g * h4))
        residual = i3 * i3 - 2 * i4 * mass
        worst = max(worst, residual)
        rep.checked += 1
        if residual > tol:
            rep.add_violation(center=family.centers[i], radius=family.radii[i], I3=i3, I4=i4, mass=mass, residual=residual)
    rep.metrics["max_residual"] = worst
    return rep
