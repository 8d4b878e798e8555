"""Euclidean rectifiability of calibrated sets.

Two cone facts drive everything here.  For ``p`` on the boundary of a
calibrated set ``E``:

* the group cone ``p exp(sum a_j Y_j)``, ``a_j > 0``, spanned by the monotone
  frame lies in ``E`` and its mirror ``a_j < 0`` lies outside;
* the Euclidean cone ``p + C`` with
  ``C = {x4 > 0, x2 > x3**2 / (2 x4)}`` lies in ``E`` and ``p - C`` misses it.

The second makes ``dE`` an entire Lipschitz graph over any hyperplane
transverse to a direction ``w`` inside ``C``; :func:`extract_rotated_graph`
samples that graph.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._bisect import threshold_bisect
from ._symbolic import ReductionStep, SymbolicReport, label, leading, poly_coefficients
from .calibrated.specs import contains
from .core import X1, X2, X3, X4, TangentVector, adjoint_exp, exp_point_many, multiply_many
from .reports import ValidationReport
from .tolerances import DEFAULT

ENGEL_NAMES = ("X1", "X2", "X3", "X4")


class NoCrossing(RuntimeError):
    """A ray never changes membership inside the search bracket."""


@dataclass(frozen=True)
class MonotoneFrame:
    """Four directions along which every calibrated set is monotone."""

    Y1: TangentVector = X1
    Y2: TangentVector = X2
    Y3: TangentVector = X4
    Y4: TangentVector = TangentVector(0.0, 1.0, 2.0, 2.0)

    @property
    def vectors(self) -> tuple[TangentVector, ...]:
        return (self.Y1, self.Y2, self.Y3, self.Y4)

    @property
    def matrix(self) -> np.ndarray:
        """Column ``j`` holds the coefficients of ``Y_{j+1}``."""
        return np.array([list(v) for v in self.vectors], dtype=float).T

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def is_independent(self, tol: float = DEFAULT.algebraic) -> bool:
        return int(np.linalg.matrix_rank(self.matrix, tol=tol)) == 4

    def require_independent(self) -> None:
        if not self.is_independent():
            raise ValueError(f"frame vectors are linearly dependent (det = {self.determinant:g})")


def in_cone(x, strict: bool = True, tol: float = 0.0):
    """Membership in ``C = {x4 > 0, 2 x2 x4 > x3**2}`` (``x1`` is free)."""
    x = np.asarray(x, dtype=float)
    x2, x3, x4 = x[..., 1], x[..., 2], x[..., 3]
    q = 2 * x2 * x4 - x3 * x3
    if strict:
        return (x4 > tol) & (x2 > tol) & (q > tol)
    return (x4 >= -tol) & (x2 >= -tol) & (q >= -tol)


def cone_aperture(w) -> float:
    """Largest angle ``theta`` with the circular cone of half-angle ``theta`` around ``w`` inside ``C``.

    For unit ``w`` the best cosine against the boundary of ``C`` is
    ``sqrt(w1**2 + lam**2)`` where ``lam`` is the top eigenvalue of
    ``[[w2, w3/sqrt2], [w3/sqrt2, w4]]``; that boundary is the image of
    ``(x1, u**2, sqrt2 u v, v**2)``.
    """
    w = np.asarray(w, dtype=float)
    w = w / np.linalg.norm(w)
    if not in_cone(w):
        return 0.0
    m = np.array([[w[1], w[2] / math.sqrt(2)], [w[2] / math.sqrt(2), w[3]]])
    lam = float(np.linalg.eigvalsh(m)[-1])
    c = min(1.0, math.sqrt(w[0] ** 2 + lam * lam))
    return math.acos(c)


def cone_lipschitz_constant(w) -> float:
    """Lipschitz bound ``cot(theta)`` for boundaries graphed along ``w``."""
    th = cone_aperture(w)
    return math.inf if th == 0.0 else 1.0 / math.tan(th)


@dataclass(frozen=True)
class GraphingDirection:
    """Unit direction strictly inside ``C``.

    The condition ``w4 > 0, w2 > w3**2 / (2 w4)`` is scale invariant, so it
    is checked on the normalised vector.
    """

    w: tuple[float, float, float, float] = (0.0, 1 / math.sqrt(2), 0.0, 1 / math.sqrt(2))

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.shape != (4,) or not np.all(np.isfinite(w)):
            raise ValueError("w must be a finite 4-vector")
        n = float(np.linalg.norm(w))
        if n == 0.0:
            raise ValueError("w must be non-zero")
        w = w / n
        if not in_cone(w):
            raise ValueError(f"w = {w.tolist()} is not strictly inside the cone x4 > 0, x2 > x3^2/(2 x4)")
        object.__setattr__(self, "w", tuple(float(c) for c in w))

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.w)

    def hyperplane_basis(self) -> np.ndarray:
        """Orthonormal basis (rows) of ``w``-perp, by Gram-Schmidt on ``e1..e4``."""
        w = self.vector
        basis = []
        for k in np.argsort(-(1 - w * w), kind="stable"):
            e = np.zeros(4)
            e[k] = 1.0
            for b in [w] + basis:
                e -= (e @ b) * b
            if np.linalg.norm(e) > 1e-8:
                basis.append(e / np.linalg.norm(e))
            if len(basis) == 3:
                break
        return np.array(basis)

    def lipschitz_bound(self) -> float:
        return cone_lipschitz_constant(self.w)


def group_cone_test(
    spec,
    frame: MonotoneFrame,
    boundary_points,
    n_alpha: int = 200,
    seed: int = 0,
    alpha_range: tuple[float, float] = (1e-3, 2.0),
    margin: float = DEFAULT.membership_margin,
) -> ValidationReport:
    """``p exp(sum a_j Y_j)`` in ``E`` for ``a_j > 0`` and outside ``E`` for ``a_j < 0``."""
    frame.require_independent()
    rng = np.random.default_rng(seed)
    lo, hi = np.log10(alpha_range[0]), np.log10(alpha_range[1])
    alpha = 10.0 ** rng.uniform(lo, hi, size=(n_alpha, 4))
    v = alpha @ frame.matrix.T
    up, down = exp_point_many(v), exp_point_many(-v)
    pts = np.atleast_2d(np.asarray(boundary_points, dtype=float))
    rep = ValidationReport(name="group-cone")
    for p in pts:
        pp = np.broadcast_to(p, up.shape)
        inside = contains(spec, multiply_many(pp, up), margin=margin)
        mirrored = contains(spec, multiply_many(pp, down), margin=-margin)
        rep.checked += 2 * n_alpha
        for i in np.nonzero(~inside)[0]:
            rep.add_violation(side="inside", p=p, alpha=alpha[i])
        for i in np.nonzero(mirrored)[0]:
            rep.add_violation(side="mirrored", p=p, alpha=-alpha[i])
    rep.metrics["frame_determinant"] = frame.determinant
    return rep


@dataclass
class ConeDescription:
    directions: np.ndarray  # unit (v1, v2) in the (x3, x4) plane
    constants: np.ndarray  # v1**2 / (2 v2), capped
    capped: np.ndarray
    cap: float

    @property
    def profile(self) -> np.ndarray:
        """Boundary points ``(x2, x3, x4)`` of the cone over the unit circle."""
        return np.column_stack([self.constants, self.directions])


def euclidean_cone_of_lemma(direction_grid, cap: float = 1e6) -> ConeDescription:
    """Partial Lipschitz constants ``v1**2 / (2 v2)`` of ``G`` along unit ``v``.

    Over the unit circle these are exactly the heights of ``C``; they blow up
    as ``v2 -> 0+`` and are reported as capped at ``cap``.
    """
    v = np.atleast_2d(np.asarray(direction_grid, dtype=float))
    if v.shape[1] != 2:
        raise ValueError("directions are pairs (v1, v2)")
    if np.any(v[:, 1] < 0):
        raise ValueError("directions need v2 >= 0")
    norms = np.linalg.norm(v, axis=1)
    if np.any(norms == 0):
        raise ValueError("zero direction")
    v = v / norms[:, None]
    with np.errstate(divide="ignore"):
        raw = np.where(v[:, 1] > 0, v[:, 0] ** 2 / (2 * np.where(v[:, 1] > 0, v[:, 1], 1.0)), np.inf)
    capped = raw > cap
    return ConeDescription(v, np.minimum(raw, cap), capped, cap)


# 13 neighbour offsets covering each adjacent pair of a 3-d grid once
_OFFSETS = [o for o in np.ndindex(3, 3, 3) if (np.array(o) - 1).tolist() > [0, 0, 0]]
_OFFSETS = [tuple(int(c) - 1 for c in o) for o in _OFFSETS]


@dataclass
class GraphSamples:
    direction: np.ndarray
    basis: np.ndarray  # rows u1, u2, u3 of the hyperplane
    u: np.ndarray  # (N, 3)
    h: np.ndarray  # (N,), +/-inf without crossing
    crossing: np.ndarray  # (N,) bool
    shape: tuple[int, int, int]
    L_hat: float
    L_bound: float
    cone_report: ValidationReport
    no_crossing: list = field(default_factory=list)

    def require_crossings(self) -> None:
        if self.no_crossing:
            raise NoCrossing(f"{len(self.no_crossing)} ray(s) without crossing, first at u = {self.no_crossing[0]}")

    def points(self) -> np.ndarray:
        return self.u @ self.basis + self.h[:, None] * self.direction[None, :]

    def to_dict(self) -> dict:
        return {
            "w": self.direction.tolist(),
            "grid": list(self.shape),
            "L_hat": self.L_hat,
            "L_bound": self.L_bound,
            "no_crossing": int((~self.crossing).sum()),
            "cone_avoidance": self.cone_report.to_dict(),
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["u1", "u2", "u3", "h", "crossing_found"])
            for (a, b, c), h, ok in zip(self.u, self.h, self.crossing):
                wr.writerow([repr(float(a)), repr(float(b)), repr(float(c)), repr(float(h)), int(ok)])


def extract_rotated_graph(
    spec,
    w: GraphingDirection = GraphingDirection(),
    n: int = 50,
    box: float = 1.0,
    bracket: tuple[float, float] = (-1e6, 1e6),
    tol: float = DEFAULT.bisect,
    n_long_pairs: int = 20000,
    seed: int = 0,
    cone_tol: float = 1e-7,
) -> GraphSamples:
    """Sample ``h`` with ``dE = {u + h(u) w}`` on an ``n**3`` grid of ``[-box, box]**3``.

    Each ray ``s -> u + s w`` is bisected for its membership threshold.  The
    empirical Lipschitz constant is the largest ``|dh| / |du|`` over all
    grid-neighbour pairs and ``n_long_pairs`` random pairs.  The same pairs
    are checked for cone avoidance: no boundary point may lie strictly inside
    ``C`` translated to another.
    """
    if not isinstance(w, GraphingDirection):
        w = GraphingDirection(tuple(w))
    wv = w.vector
    B = w.hyperplane_basis()
    g = np.linspace(-box, box, n)
    U = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    Q = U @ B
    N = Q.shape[0]

    def member(s):
        return contains(spec, Q + s[:, None] * wv[None, :])

    h = threshold_bisect(member, np.full(N, bracket[0]), np.full(N, bracket[1]), tol)
    crossing = np.isfinite(h)

    pairs_i, pairs_j = [], []
    idx = np.arange(N).reshape(n, n, n)
    for o in _OFFSETS:
        sl_a = tuple(slice(max(0, -c), n - max(0, c)) for c in o)
        sl_b = tuple(slice(max(0, c), n - max(0, -c)) for c in o)
        pairs_i.append(idx[sl_a].ravel())
        pairs_j.append(idx[sl_b].ravel())
    rng = np.random.default_rng(seed)
    if N > 1 and n_long_pairs > 0:
        a = rng.integers(0, N, n_long_pairs)
        b = rng.integers(0, N, n_long_pairs)
        keep = a != b
        pairs_i.append(a[keep])
        pairs_j.append(b[keep])
    I = np.concatenate(pairs_i) if pairs_i else np.zeros(0, int)
    J = np.concatenate(pairs_j) if pairs_j else np.zeros(0, int)
    ok = crossing[I] & crossing[J]
    I, J = I[ok], J[ok]
    du = np.linalg.norm(U[I] - U[J], axis=1)
    ratio = np.abs(h[I] - h[J]) / du
    L_hat = float(ratio.max()) if ratio.size else math.nan

    P = Q + np.where(crossing, h, 0.0)[:, None] * wv[None, :]
    d = P[J] - P[I]
    scale = np.linalg.norm(d, axis=1)
    unit = d / np.where(scale > 0, scale, 1.0)[:, None]
    bad = in_cone(unit, tol=cone_tol) | in_cone(-unit, tol=cone_tol)
    cone_rep = ValidationReport(name="cone-avoidance", checked=int(I.size))
    for k in np.nonzero(bad)[0]:
        cone_rep.add_violation(p=P[I[k]], q=P[J[k]])

    misses = [tuple(U[i]) for i in np.nonzero(~crossing)[0]]
    return GraphSamples(wv, B, U, h, crossing, (n, n, n), L_hat, w.lipschitz_bound(), cone_rep, misses)


def half_space_reduction_X1() -> SymbolicReport:
    """If ``X1`` is the normal then ``X2, X3, X4`` are invariant directions.

    ``X2`` is invariant by assumption.  Conjugating the monotone direction
    ``X1`` by ``exp(t X2)`` and then by ``exp(t X3)`` gives ``X1 - t X3`` and
    ``X1 - t X4``; letting ``t -> +/-inf`` makes ``+/-X3`` and then ``+/-X4``
    monotone, hence invariant.
    """
    one = Fraction(1)
    x1 = TangentVector(one, 0 * one, 0 * one, 0 * one)
    rep = SymbolicReport(invariants=["X2"])
    for k, name in ((1, "X2"), (2, "X3")):
        e = TangentVector(*(one if i == k else 0 * one for i in range(4)))
        coeffs = poly_coefficients(lambda t: adjoint_exp(e * t, x1), 2)
        deg, vec = leading(coeffs)
        derived = [ENGEL_NAMES[i] for i, c in enumerate(vec) if c != 0]
        ok = deg % 2 == 1 and len(derived) == 1
        if ok:
            rep.invariants.append(derived[0])
        rep.steps.append(
            ReductionStep(
                conjugate_by=f"exp(t {name})",
                applied_to="X1",
                expansion=[label(c, ENGEL_NAMES) for c in coeffs[: deg + 1]],
                leading_degree=deg,
                leading_term=label(vec, ENGEL_NAMES),
                derived=derived[0] if len(derived) == 1 else label(vec, ENGEL_NAMES),
            )
        )
    rep.conclusion = "vertical half-space" if rep.invariants == ["X2", "X3", "X4"] else "reduction incomplete"
    return rep
