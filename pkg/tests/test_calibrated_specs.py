import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from engel_normal.calibrated import (
    FGK,
    Cone,
    ConfigError,
    CustomG,
    GraphFunction,
    HalfSpace,
    JumpSegment,
    MonotoneG,
    PiecewiseLinear,
    boundary_point,
    boundary_points,
    contains,
    dumps,
    load,
    loads,
)

SPECS = [
    Cone(),
    HalfSpace(),
    HalfSpace((0, 1, 1, 1), 0.5),
    HalfSpace((0, 0, 0, 1), 1.0),
    MonotoneG(PiecewiseLinear.linear(-1.0)),
    MonotoneG(PiecewiseLinear.step([0.0], [0.0, -1.0])),
    FGK(PiecewiseLinear.linear(1.0), PiecewiseLinear.constant(0.0), 1.0),
]

coord = st.floats(-5, 5, allow_nan=False)


def test_contains_examples():
    c = Cone()
    assert contains(c, (0, 1, 1, 1))
    assert not contains(c, (0, 1, 1, -1))
    assert not contains(c, (0, 0.5, 1, 1))  # on the boundary: open set
    assert contains(HalfSpace((0, 0, 0, 1), 1.0), (0, -1e9, 0, 2))  # G = -inf
    assert not contains(HalfSpace((0, 0, 0, 1), 1.0), (0, 1e9, 0, 0))  # G = +inf


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.variant)
@given(p=st.tuples(coord, coord, coord, coord), s=st.floats(-100, 100))
def test_x1_invariance(spec, p, s):
    q = (p[0] + s,) + p[1:]
    assert contains(spec, p) == contains(spec, q)


def test_contains_vectorised():
    pts = np.array([[0, 1, 1, 1], [0, 1, 1, -1], [3, 2, 0, 0.1]])
    assert contains(Cone(), pts).tolist() == [True, False, True]


def test_halfspace_graphs():
    G = HalfSpace((0, 2, 1, 1), 4.0).graph
    assert G(0.0, 0.0) == 2.0 and G(2.0, 2.0) == 0.0
    V = HalfSpace((0, 0, 0, 1), 1.0).graph
    assert V.b == 1.0 and V(0, 2) == -math.inf and V(0, 0) == math.inf
    assert math.isnan(HalfSpace((0, 0, 1, 0), 0.0).graph.b)


@pytest.mark.parametrize("normal", [(1, 1, 0, 0), (0, -1, 0, 0), (0, 0, 0, 0), (0, 1, 0)])
def test_halfspace_rejects(normal):
    with pytest.raises(ValueError):
        HalfSpace(normal)


def test_halfspace_admissibility():
    assert HalfSpace((0, 1, 1, 1)).check().passed  # 1 <= 2
    assert not HalfSpace((0, 1, 2, 1)).check().passed  # 4 > 2
    assert HalfSpace((0, 0, 0, 1), 3.0).check().passed
    assert not HalfSpace((0, 0, 0, -1)).check().passed
    assert not HalfSpace((0, 0, 1, 0)).check().passed


def test_family_admissibility():
    assert MonotoneG(PiecewiseLinear.step([0], [1, 0])).check().passed
    assert not MonotoneG(PiecewiseLinear.linear(1.0)).check().passed
    assert not MonotoneG(lambda x: -np.where(x > 0, 0.0, 1.0)).check().passed  # lower semi-continuous step
    assert MonotoneG(lambda x: -np.tanh(x)).check().passed
    assert FGK(PiecewiseLinear.linear(2.0), PiecewiseLinear.constant(0.0), 1.0).check().passed  # 2 = 2/K^2
    rep = FGK(PiecewiseLinear.linear(4.0), PiecewiseLinear.constant(0.0), 1.0).check()
    assert not rep.passed and rep.metrics["f_lipschitz"] == 4.0
    assert not FGK(PiecewiseLinear.linear(-1.0), PiecewiseLinear.constant(0.0), 1.0).check().passed
    assert not FGK(PiecewiseLinear.linear(1.0), PiecewiseLinear.constant(0.0), -1.0).check().passed


def test_fgk_jump_segments_follow_f():
    f = PiecewiseLinear.step([0.5], [0.0, 0.25])
    spec = FGK(f, PiecewiseLinear.constant(0.0), 2.0)
    (seg,) = spec.graph.jump_segments
    assert not seg.is_horizontal()
    assert not spec.check().passed  # f has infinite Lipschitz constant


def test_custom_g_checks_jumps():
    ok = CustomG(GraphFunction(lambda a, b: np.where(b > 1, 0.0, 2.0), (JumpSegment.horizontal(1.0, 2.0, 0.0),)))
    assert ok.check().passed
    bad = CustomG(GraphFunction(lambda a, b: a * 0, (JumpSegment((0, -1), (0, 1), 0, 1),)))
    assert not bad.check().passed
    with pytest.raises(ValueError):
        CustomG().graph


def test_boundary_points_bisection():
    pts = boundary_points(Cone(), [[0.0, 1.0, 2.0], [5.0, 0.0, -1.0], [1.0, 2.0, 0.5]])
    assert abs(pts[0, 1] - 0.25) < 1e-9 and pts[0, 0] == 0.0
    assert pts[1, 1] == math.inf  # G = +inf
    assert abs(pts[2, 1] - 4.0) < 1e-9 and pts[2, 0] == 1.0
    assert boundary_point(HalfSpace((0, 0, 0, 1), 0.0), 0, 0, 1) is None
    p = boundary_point(MonotoneG(PiecewiseLinear.linear(-2.0)), 0.0, 0.0, 1.0)
    assert abs(p.x2 + 2.0) < 1e-9


# -- config -----------------------------------------------------------------


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.variant)
def test_config_roundtrip(spec):
    back = loads(dumps(spec))
    assert type(back) is type(spec)
    rng = np.random.default_rng(0)
    pts = rng.uniform(-3, 3, size=(500, 4))
    assert np.array_equal(contains(spec, pts), contains(back, pts))


def test_config_reads_file(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text("[set]\nvariant = fgk\nK = 2\n[f]\nx = 0, 1\ny = 0, 0.5\nextrapolate = linear\n[g]\nx = 0\ny = 0\n")
    spec = load(path)
    assert isinstance(spec, FGK) and spec.K == 2.0 and spec.f(2.0) == 1.0


@pytest.mark.parametrize(
    "text",
    [
        "not an ini",
        "[other]\na = 1\n",
        "[set]\nvariant = sphere\n",
        "[set]\nvariant = monotone\n",
        "[set]\nvariant = monotone\n[g]\nx = 0, 1\n",
        "[set]\nvariant = monotone\n[g]\nx = 0, a\ny = 1, 2\n",
        "[set]\nvariant = fgk\n[f]\nx=0\ny=0\n[g]\nx=0\ny=0\n",
        "[set]\nvariant = halfspace\nnormal = 1, 1, 0, 0\n",
        "[set]\nvariant = monotone\n[g]\nx = 1, 0\ny = 0, 0\n",
    ],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        loads(text)


def test_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load(tmp_path / "nope.cfg")


def test_custom_not_serialisable():
    with pytest.raises(ConfigError):
        dumps(CustomG(GraphFunction(lambda a, b: a)))
