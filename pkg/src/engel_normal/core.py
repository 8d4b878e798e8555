"""Engel group arithmetic in exponential coordinates of the second kind.

The chart is ``(x1, x2, x3, x4) -> exp(x4 X4) exp(x3 X3) exp(x2 X2) exp(x1 X1)``
and the Lie algebra is spanned by ``X1..X4`` with the only non-trivial
brackets ``[X1, X2] = X3`` and ``[X1, X3] = X4``.  In this chart the
left-invariant fields read::

    X1 = d1
    X2 = d2 + x1 d3 + x1**2/2 d4
    X3 = d3 + x1 d4
    X4 = d4

Points and tangent vectors are small immutable tuples.  The scalar functions
use plain Python arithmetic, so they also work with ``fractions.Fraction``
or ``sympy`` coefficients; the ``*_many`` variants are vectorised over numpy
arrays of shape ``(n, 4)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class Point(NamedTuple):
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    x4: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(float(c)) for c in self)

    def translate(self, other) -> "Point":
        """Coordinate-wise (Euclidean) translation, not the group product."""
        return Point(*(a + b for a, b in zip(self, other)))


class TangentVector(NamedTuple):
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0

    def __add__(self, other):
        return TangentVector(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return TangentVector(*(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return TangentVector(*(-a for a in self))

    def __mul__(self, s):
        return TangentVector(*(a * s for a in self))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self)


X1 = TangentVector(1.0, 0.0, 0.0, 0.0)
X2 = TangentVector(0.0, 1.0, 0.0, 0.0)
X3 = TangentVector(0.0, 0.0, 1.0, 0.0)
X4 = TangentVector(0.0, 0.0, 0.0, 1.0)
BASIS = (X1, X2, X3, X4)
ORIGIN = Point()
# integer copies keep exact coefficient types (Fraction stays Fraction)
_E1, _E2, _E3, _E4 = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)


def bracket(v, w) -> TangentVector:
    """Lie bracket ``[v, w]`` of the Engel algebra."""
    a1, a2, a3, _ = v
    b1, b2, b3, _ = w
    return TangentVector(0 * a1, 0 * a1, a1 * b2 - a2 * b1, a1 * b3 - a3 * b1)


def adjoint_exp(v, w) -> TangentVector:
    """``Ad_{exp(v)} w = w + [v, w] + [v, [v, w]] / 2`` (the series stops at step 3)."""
    vw = bracket(v, w)
    vvw = bracket(v, vw)
    # c / 2 stays exact for Fraction and sympy coefficients
    return TangentVector(*w) + vw + TangentVector(*(c / 2 for c in vvw))


def zt_direction(t) -> TangentVector:
    """``Z_t = Ad_{exp(t X1)} X2 = X2 + t X3 + t**2/2 X4``."""
    return TangentVector(0.0, 1.0, t, t * t / 2)


def flow(p, v, t) -> Point:
    """Time-``t`` flow of the left-invariant field ``v`` from ``p``, i.e. ``p * exp(t v)``.

    Closed form of the triangular system
    ``x1' = c1, x2' = c2, x3' = c3 + c2 x1, x4' = c4 + c3 x1 + c2 x1**2 / 2``.
    """
    p1, p2, p3, p4 = p
    c1, c2, c3, c4 = v
    # integrals of x1(s) = p1 + c1 s and of x1(s)**2 over [0, t]
    i1 = p1 * t + c1 * t * t / 2
    i2 = p1 * p1 * t + p1 * c1 * t * t + c1 * c1 * t * t * t / 3
    return Point(
        p1 + c1 * t,
        p2 + c2 * t,
        p3 + c3 * t + c2 * i1,
        p4 + c4 * t + c3 * i1 + c2 * i2 / 2,
    )


def flow_many(points, v, t) -> np.ndarray:
    """Vectorised :func:`flow`.

    ``points`` has shape ``(n, 4)`` (or ``(4,)``), ``v`` shape ``(4,)`` or ``(n, 4)``
    and ``t`` is a scalar or an array broadcastable to ``(n,)``.
    """
    p = np.asarray(points, dtype=float)
    c = np.asarray(v, dtype=float)
    t = np.asarray(t, dtype=float)
    p1, p2, p3, p4 = np.moveaxis(p, -1, 0)
    c1, c2, c3, c4 = np.moveaxis(c, -1, 0)
    i1 = p1 * t + c1 * t * t / 2
    i2 = p1 * p1 * t + p1 * c1 * t * t + c1 * c1 * t ** 3 / 3
    return np.stack(
        [
            p1 + c1 * t,
            p2 + c2 * t,
            p3 + c3 * t + c2 * i1,
            p4 + c4 * t + c3 * i1 + c2 * i2 / 2,
        ],
        axis=-1,
    )


def multiply(p, q) -> Point:
    """Group product ``p * q`` by flowing along the factorisation of ``q``."""
    q1, q2, q3, q4 = q
    r = flow(p, _E4, q4)
    r = flow(r, _E3, q3)
    r = flow(r, _E2, q2)
    return flow(r, _E1, q1)


def multiply_many(p, q) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p, q = np.broadcast_arrays(p, q)
    r = flow_many(p, X4, q[..., 3])
    r = flow_many(r, X3, q[..., 2])
    r = flow_many(r, X2, q[..., 1])
    return flow_many(r, X1, q[..., 0])


def inverse(p) -> Point:
    """Group inverse: ``exp(-x1 X1) exp(-x2 X2) exp(-x3 X3) exp(-x4 X4)``."""
    p1, p2, p3, p4 = p
    zero = 0 * p1
    r = flow((zero, zero, zero, zero), _E1, -p1)
    r = flow(r, _E2, -p2)
    r = flow(r, _E3, -p3)
    return flow(r, _E4, -p4)


def exp_point(v) -> Point:
    """``exp(v)`` written in the chart."""
    return flow(ORIGIN, v, 1.0)


def exp_point_many(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return flow_many(np.zeros_like(v), v, 1.0)


@dataclass(frozen=True)
class BasisChange:
    """A linear map of the Lie algebra given by its coefficient table.

    Column ``j`` of ``matrix`` holds the coefficients of the image of ``X_{j+1}``.
    """

    matrix: np.ndarray
    inverse: np.ndarray

    def apply(self, v) -> TangentVector:
        return TangentVector(*(self.matrix @ np.asarray(v, dtype=float)))

    def apply_inverse(self, v) -> TangentVector:
        return TangentVector(*(self.inverse @ np.asarray(v, dtype=float)))

    def image(self, j: int) -> TangentVector:
        """Image of the basis vector ``X_j`` (1-based)."""
        return TangentVector(*self.matrix[:, j - 1])


def normalize_normal(alpha: float, beta: float) -> BasisChange:
    """Endomorphism ``psi`` with ``psi X1 = alpha X1 + beta X2``.

    ``psi X2 = X2``, ``psi X3 = alpha X3`` and ``psi X4 = alpha**2 X4``; this
    preserves the bracket relations, so a horizontal normal with non-zero
    ``X1`` component can be moved onto ``X1``.  For ``alpha == 0`` the normal
    is already a multiple of ``X2`` and the identity is returned.
    """
    if alpha == 0:
        eye = np.eye(4)
        return BasisChange(eye, eye.copy())
    m = np.array(
        [
            [alpha, 0.0, 0.0, 0.0],
            [beta, 1.0, 0.0, 0.0],
            [0.0, 0.0, alpha, 0.0],
            [0.0, 0.0, 0.0, alpha * alpha],
        ]
    )
    return BasisChange(m, np.linalg.inv(m))
