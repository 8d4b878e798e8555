import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from engel_normal.calibrated import Cone, HalfSpace, MonotoneG, PiecewiseLinear, boundary_points
from engel_normal.intrinsic import (
    IntrinsicGraphQuery,
    NonMonotoneMembership,
    cone_T_closed_form,
    cone_T_many,
    demonstrate_discontinuity,
    holder_bound_check,
    holder_constant,
    holder_profile,
    intrinsic_cone_test,
    intrinsic_T,
    intrinsic_T_many,
    lipschitz_blowup_exponent,
    write_T_csv,
)
from oracles import cone_T_bisection, rk4_flow

# frozen from the RK4 + bisection oracle and the brute-force grid below
K_STAR = {0.5: 6.349094975252072, 1.0: 4.27451056440629, 2.0: 2.902319765347538}
T_CONE_2_1_M1 = 2.9023197653476274  # RK4 oracle, a = 2, (p3, p4) = (1, -1)


def test_cone_examples():
    # (0, 0, 0, -1/24) along X1 + X2 reaches the cone at t = 1
    q = IntrinsicGraphQuery(Cone(), 1.0, (0, 0, 0, -1 / 24))
    assert abs(intrinsic_T(q) - 1.0) < 1e-9
    assert abs(cone_T_closed_form(1.0, 0.0, -1 / 24) - 1.0) < 1e-12
    assert cone_T_closed_form(1.0, 0.0, 1.0) == 0.0  # p4 > 0, p3 = 0: on the boundary at t = 0
    assert abs(cone_T_closed_form(2.0, 1.0, -1.0) - T_CONE_2_1_M1) < 1e-9
    assert abs(cone_T_bisection(2.0, 1.0, -1.0) - T_CONE_2_1_M1) < 1e-9


def test_query_validation():
    with pytest.raises(ValueError):
        IntrinsicGraphQuery(Cone(), 1.0, (0, 1, 0, 0))
    with pytest.raises(ValueError):
        intrinsic_T_many(Cone(), 1.0, [[0, 0, 0]])
    with pytest.raises(ValueError):
        intrinsic_T_many(Cone(), 1.0, [[0, 0, 0, 1]], bracket=(1, -1))
    with pytest.raises(ValueError):
        intrinsic_T_many(Cone(), 1.0, [[0, 0, 0, 1]], tol=0)
    with pytest.raises(ValueError):
        cone_T_closed_form(0.0, 1.0, 1.0)


def test_halfspace_and_monotone_T():
    # vertical half-space {x4 > 0}: T is -inf above and +inf below along X2
    assert intrinsic_T(IntrinsicGraphQuery(HalfSpace((0, 0, 0, 1)), 0.0, (0, 0, 0, 1))) == -math.inf
    assert intrinsic_T(IntrinsicGraphQuery(HalfSpace((0, 0, 0, 1)), 0.0, (0, 0, 0, -1))) == math.inf
    # along X2 alone T(p) = g(p4)
    spec = MonotoneG(PiecewiseLinear.linear(-0.5, 1.0))
    assert abs(intrinsic_T(IntrinsicGraphQuery(spec, 0.0, (3, 0, 7, 2))) - 0.0) < 1e-9


def test_non_monotone_membership_detected():
    with pytest.raises(NonMonotoneMembership):
        intrinsic_T(IntrinsicGraphQuery(MonotoneG(PiecewiseLinear.linear(1.0)), 1.0, (0, 0, 1, -1)))


def test_closed_form_against_oracle():
    rng = np.random.default_rng(7)
    a = rng.choice([-2.0, -0.5, 0.5, 1.0, 3.0], 1000)
    p3, p4 = rng.uniform(-2, 2, 1000), rng.uniform(-2, 2, 1000)
    closed = np.array([cone_T_closed_form(*z) for z in zip(a, p3, p4)])
    base = np.zeros((1000, 4))
    base[:, 2], base[:, 3] = p3, p4
    for s in (-2.0, -0.5, 0.5, 1.0, 3.0):
        m = a == s
        bis = intrinsic_T_many(Cone(), s, base[m], bracket=(-1e3, 1e3), tol=1e-11)
        assert np.max(np.abs(closed[m] - np.maximum(bis, 0.0))) < 1e-9
    for i in range(0, 1000, 50):
        assert abs(closed[i] - cone_T_bisection(a[i], p3[i], p4[i])) < 1e-8


@given(a=st.sampled_from([-3.0, -1.0, 0.5, 1.0, 2.0]), p3=st.floats(-3, 3), p4=st.floats(-3, 3))
def test_closed_form_is_the_threshold(a, p3, p4):
    t = cone_T_closed_form(a, p3, p4)
    assert t >= 0
    eps = 1e-7 * max(1.0, t)

    def inside(s):
        return np.all(
            [
                s > 0,
                a * a * s**4 / 12 - p3 * a * s * s + 2 * p4 * s - p3 * p3 > 0,
                p4 + a * a * s**3 / 6 > 0,
            ]
        )

    assert inside(t + eps)
    if t > eps:
        assert not inside(t - eps)
        q = a * a * t**4 / 12 - p3 * a * t * t + 2 * p4 * t - p3 * p3
        # on the quartic or on the constraint surface
        assert min(abs(q), abs(p4 + a * a * t**3 / 6)) < 1e-8 * max(1.0, t**4)


@given(a=st.sampled_from([0.5, 1.0, 2.0]), p3=st.floats(-2, 2), p4=st.floats(-2, 2), lam=st.floats(0.1, 10))
def test_dilation_homogeneity(a, p3, p4, lam):
    t = cone_T_closed_form(a, p3, p4)
    assert abs(cone_T_closed_form(a, lam**2 * p3, lam**3 * p4) - lam * t) < 1e-8 * max(1.0, lam * t)


@given(a=st.sampled_from([0.5, 1.0, 2.0]), s=st.floats(0.1, 10), p3=st.floats(-2, 2), p4=st.floats(-2, 2))
def test_direction_scaling(a, s, p3, p4):
    # x -> (s x1, x2, s x3, s**2 x4) is an automorphism preserving the cone
    t = cone_T_closed_form(a, p3, p4)
    assert abs(cone_T_closed_form(s * a, s * p3, s * s * p4) - t) < 1e-8 * max(1.0, t)


@given(a=st.floats(0.1, 10), p4=st.floats(-10, -1e-3))
def test_vertical_axis_scaling(a, p4):
    # T(0, p4) = cbrt(24 |p4| / a**2), so a**(2/3) T is independent of a
    t = cone_T_closed_form(a, 0.0, p4)
    assert abs(a ** (2 / 3) * t - np.cbrt(24 * abs(p4))) < 1e-9 * max(1.0, t)


def test_cone_T_many_matches_scalar():
    p3, p4 = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(-1, 1, 5))
    many = cone_T_many(1.0, p3, p4)
    assert many.shape == p3.shape
    assert np.array_equal(many, np.vectorize(lambda u, v: cone_T_closed_form(1.0, u, v))(p3, p4))


@pytest.mark.parametrize("a", sorted(K_STAR))
def test_holder_constant_frozen(a):
    K, arg = holder_constant(a)
    assert abs(K - K_STAR[a]) < 1e-9
    assert np.allclose(arg, (1.0, -1.0))


def test_holder_constant_brute_force():
    # RK4 flow on a (p3, p4, t) grid; T is the first grid time inside the cone
    a = 1.0
    g = np.linspace(-1, 1, 21)
    p3, p4 = [x.ravel() for x in np.meshgrid(g, g)]
    ts = np.arange(1, 3001) * 2e-3
    base = np.zeros((p3.size, 4))
    base[:, 2], base[:, 3] = p3, p4
    rows = np.repeat(base, ts.size, axis=0)
    tt = np.tile(ts, p3.size)
    x = rk4_flow(rows, np.array([a, 1.0, 0, 0]), tt, steps=4)
    inside = ((x[:, 3] > 0) & (2 * x[:, 1] * x[:, 3] > x[:, 2] ** 2)).reshape(p3.size, ts.size)
    T = np.where(inside.any(axis=1), ts[np.argmax(inside, axis=1)], np.inf)
    gauge = holder_profile(p3, p4)
    ratio = np.where(gauge > 0, T / np.where(gauge > 0, gauge, 1), 0)
    assert abs(ratio.max() - K_STAR[a]) < 5e-3
    assert np.allclose((p3[ratio.argmax()], p4[ratio.argmax()]), (1.0, -1.0))


def test_holder_bound_check():
    g = np.linspace(-1, 1, 40)
    pts = np.column_stack([a.ravel() for a in np.meshgrid(g, g)])
    K = K_STAR[1.0]
    ok = holder_bound_check(Cone(), 1.0, K, pts)
    assert ok.passed and ok.metrics["max_T_over_gauge"] <= K + 1e-8
    assert not holder_bound_check(Cone(), 1.0, K / 10, pts).passed
    with pytest.raises(ValueError):
        holder_bound_check(Cone(), 1.0, -1.0, pts)


def test_lipschitz_blowup():
    fit = lipschitz_blowup_exponent(1.0, -np.logspace(-6, 0, 13))
    assert abs(fit.slope - 1 / 3) < 1e-6
    assert abs(fit.prefactor - 24 ** (1 / 3)) < 1e-5
    fit2 = lipschitz_blowup_exponent(2.0, -np.logspace(-4, 0, 5))
    assert abs(fit2.prefactor - 6 ** (1 / 3)) < 1e-5
    # T / |p4| is unbounded as p4 -> 0
    assert fit.T[0] / abs(fit.p4[0]) > 1e3 * fit.T[-1] / abs(fit.p4[-1])


@pytest.mark.parametrize("seq", [[-1.0], [-1.0, 0.0], [-1.0, -1.0], [1.0, 2.0]])
def test_lipschitz_blowup_errors(seq):
    with pytest.raises(ValueError):
        lipschitz_blowup_exponent(1.0, seq)
    with pytest.raises(ValueError):
        lipschitz_blowup_exponent(0.0, [-1.0, -2.0])


def test_discontinuity_found():
    rep = demonstrate_discontinuity(PiecewiseLinear.step([0.3], [1.0, -0.5]))
    (j,) = rep.jumps
    assert abs(j.location - 0.3) < 1e-8
    assert abs(j.size - 1.5) < 1e-8
    two = demonstrate_discontinuity(PiecewiseLinear.step([-1.0, 1.0], [2.0, 1.0, 0.0]))
    assert [round(j.location, 6) for j in two.jumps] == [-1.0, 1.0]
    smooth = demonstrate_discontinuity(PiecewiseLinear.linear(-1.0))
    assert smooth.jumps == [] and smooth.notes
    with pytest.raises(ValueError):
        demonstrate_discontinuity(PiecewiseLinear.step([0.0], [0.0, 1.0]))


def test_intrinsic_cone_test():
    rng = np.random.default_rng(3)
    x = np.column_stack([rng.uniform(-1, 1, 10), rng.uniform(-1, 1, 10), rng.uniform(0.2, 2, 10)])
    bps = boundary_points(Cone(), x)
    rep = intrinsic_cone_test(Cone(), 1.0, bps, K=K_STAR[1.0], n_samples=200)
    assert rep.passed
    assert not intrinsic_cone_test(Cone(), 1.0, bps, K=0.1, n_samples=200).passed


def test_write_T_csv(tmp_path):
    path = tmp_path / "T.csv"
    p3 = np.array([0.0, 1.0])
    p4 = np.array([-1 / 24, -1.0])
    T = cone_T_many(1.0, p3, p4)
    write_T_csv(path, p3, p4, T, 1.0)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["p3", "p4", "T", "direction_a"]
    assert float(rows[2][2]) == T[1]  # repr round-trips exactly
    write_T_csv(tmp_path / "b.csv", p3, p4, T, [1.0, 2.0])
    assert [r[3] for r in csv.reader(open(tmp_path / "b.csv"))][1:] == ["1.0", "2.0"]
