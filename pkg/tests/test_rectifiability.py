import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from engel_normal.calibrated import FGK, Cone, HalfSpace, MonotoneG, PiecewiseLinear, boundary_points
from engel_normal.core import X1, X2, X3, TangentVector
from engel_normal.rectifiability import (
    GraphingDirection,
    MonotoneFrame,
    NoCrossing,
    cone_aperture,
    cone_lipschitz_constant,
    euclidean_cone_of_lemma,
    extract_rotated_graph,
    group_cone_test,
    half_space_reduction_X1,
    in_cone,
)

W0 = (0.0, 1 / math.sqrt(2), 0.0, 1 / math.sqrt(2))


def test_frame():
    f = MonotoneFrame()
    assert abs(f.determinant + 2.0) < 1e-12
    assert f.is_independent()
    bad = MonotoneFrame(X1, X2, X3, TangentVector(1.0, 1.0, 1.0, 0.0))
    assert not bad.is_independent()
    with pytest.raises(ValueError):
        group_cone_test(Cone(), bad, [[0, 0.5, 1, 1]])


@pytest.mark.parametrize("spec", [Cone(), HalfSpace((0, 1, 1, 1), 0.2), MonotoneG(PiecewiseLinear.step([1.0], [1.0, -1.0]))])
def test_group_cone_on_calibrated_boundaries(spec):
    rng = np.random.default_rng(2)
    x = np.column_stack([rng.uniform(-1, 1, 8), rng.uniform(-1, 1, 8), rng.uniform(0.2, 2, 8)])
    pts = boundary_points(spec, x)
    pts = pts[np.isfinite(pts[:, 1])]
    assert group_cone_test(spec, MonotoneFrame(), pts, n_alpha=100).passed


def test_group_cone_falsifies():
    spec = MonotoneG(PiecewiseLinear.linear(1.0))
    pts = boundary_points(spec, [[0.0, 0.0, 0.5]])
    assert not group_cone_test(spec, MonotoneFrame(), pts, n_alpha=200).passed


def test_in_cone_examples():
    assert in_cone([5, 1, 1, 1])
    assert not in_cone([0, 1, 2, 1])
    assert not in_cone([0, 0.5, 1, 1])
    assert in_cone([0, 0.5, 1, 1], strict=False)
    assert in_cone(np.array([[0, 1, 0, 1], [0, -1, 0, 1]])).tolist() == [True, False]


def test_aperture_examples():
    assert abs(cone_lipschitz_constant(W0) - 1.0) < 1e-12
    assert cone_aperture((0, 1, 2, 1)) == 0.0
    assert cone_lipschitz_constant((0, -1, 0, 1)) == math.inf


def _brute_aperture(w, n=400_000, seed=0):
    # sample the boundary 2 x2 x4 = x3**2 directly and take the closest direction
    rng = np.random.default_rng(seed)
    x1 = rng.normal(size=n) * rng.choice([0.0, 1.0], n, p=[0.3, 0.7])
    x4 = rng.exponential(size=n) * rng.choice([1e-3, 1.0, 10.0], n)
    x3 = rng.normal(size=n) * rng.choice([1e-3, 1.0, 10.0], n)
    x2 = x3 * x3 / (2 * x4)
    b = np.column_stack([x1, x2, x3, x4])
    b /= np.linalg.norm(b, axis=1)[:, None]
    w = np.asarray(w) / np.linalg.norm(w)
    return math.acos(min(1.0, float(np.max(b @ w))))


@pytest.mark.parametrize("w", [W0, (0, 1, 0, 1), (0.3, 1, 0.4, 2), (-1, 2, -1, 1), (0, 3, 1, 0.5)])
def test_aperture_against_sampled_boundary(w):
    th = cone_aperture(w)
    brute = _brute_aperture(w)
    assert th <= brute + 1e-9
    assert brute - th < 2e-2


@given(st.tuples(st.floats(-2, 2), st.floats(0.01, 3), st.floats(-2, 2), st.floats(0.01, 3)))
def test_circular_cone_inside_C(w):
    w = np.asarray(w)
    if not in_cone(w / np.linalg.norm(w)):
        with pytest.raises(ValueError):
            GraphingDirection(tuple(w))
        return
    d = GraphingDirection(tuple(w))
    th = cone_aperture(d.w)
    rng = np.random.default_rng(0)
    z = rng.normal(size=(500, 4))
    z -= (z @ d.vector)[:, None] * d.vector[None, :]
    z /= np.linalg.norm(z, axis=1)[:, None]
    ang = 0.999 * th
    y = math.cos(ang) * d.vector[None, :] + math.sin(ang) * z
    assert np.all(in_cone(y, strict=False, tol=1e-12))


def test_graphing_direction():
    d = GraphingDirection((0, 2, 0, 2))
    assert np.allclose(d.w, W0)
    B = d.hyperplane_basis()
    assert np.allclose(B @ B.T, np.eye(3)) and np.allclose(B @ d.vector, 0)
    for bad in [(0, 0, 0, 0), (0, 1, 0, -1), (0, 1, 2, 1), (1, 1, 1), (np.nan, 1, 0, 1)]:
        with pytest.raises(ValueError):
            GraphingDirection(bad)


def test_euclidean_cone_profile_is_C():
    th = np.linspace(1e-3, math.pi - 1e-3, 101)
    desc = euclidean_cone_of_lemma(np.column_stack([np.cos(th), np.sin(th)]))
    x2, x3, x4 = desc.profile.T
    assert np.allclose(2 * x2 * x4, x3 * x3)
    assert not desc.capped.any()
    edge = euclidean_cone_of_lemma([[1.0, 0.0], [0.0, 1.0]])
    assert edge.capped.tolist() == [True, False] and edge.constants[1] == 0.0
    for bad in ([[1.0, -1.0]], [[0.0, 0.0]], [[1, 2, 3]]):
        with pytest.raises(ValueError):
            euclidean_cone_of_lemma(bad)


@pytest.mark.parametrize("spec", [Cone(), HalfSpace(), HalfSpace((0, 1, 1, 1), 0.2), MonotoneG(PiecewiseLinear.step([0.0], [0.5, 0.0]))])
def test_rotated_graph_lipschitz(spec):
    g = extract_rotated_graph(spec, n=15)
    g.require_crossings()
    assert g.crossing.all()
    assert g.L_hat <= g.L_bound + 1e-6
    assert g.cone_report.passed
    pts = g.points()
    assert np.allclose(pts @ g.basis.T, g.u)


def test_rotated_graph_falsifies_non_calibrated():
    spec = FGK(PiecewiseLinear.linear(4.0), PiecewiseLinear.constant(0.0), 1.0)
    g = extract_rotated_graph(spec, n=15)
    assert g.L_hat > g.L_bound + 1e-3
    assert not g.cone_report.passed


def test_no_crossing(tmp_path):
    g = extract_rotated_graph(Cone(), n=5, bracket=(-1e-3, 1e-3))
    assert g.no_crossing and not g.crossing.all()
    with pytest.raises(NoCrossing):
        g.require_crossings()
    path = tmp_path / "g.csv"
    g.write_csv(path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["u1", "u2", "u3", "h", "crossing_found"]
    assert len(rows) == 126
    assert {r[4] for r in rows[1:]} == {"0", "1"}
    assert g.to_dict()["no_crossing"] == len(g.no_crossing)


def test_half_space_reduction():
    rep = half_space_reduction_X1()
    assert rep.invariants == ["X2", "X3", "X4"]
    assert rep.conclusion == "vertical half-space"
    assert [s.leading_term for s in rep.steps] == ["-X3", "-X4"]
    assert "vertical half-space" in rep.summary()
