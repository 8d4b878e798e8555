"""X2-calibrated sets ``E = {x2 > G(x3, x4)}``: construction and validation."""

from .checks import (
    Sampler,
    check_jump_condition,
    check_level_set,
    check_monotone_direction,
    check_partial_lipschitz,
    check_upper_semicontinuity,
    check_X2_monotone,
    check_zt_family,
    cone_inclusion,
    sample_cone_interior,
)
from .config import ConfigError, dumps, load, loads
from .functions import GraphFunction, JumpSegment, PiecewiseLinear, Rect
from .pdi import (
    RegionContainsInfinite,
    RegionContainsJump,
    SupportEscapesDomain,
    TestFunctionFamily,
    pdi_distributional,
    pdi_pointwise,
)
from .specs import FGK, CalibratedSetSpec, Cone, CustomG, HalfSpace, MonotoneG, boundary_point, boundary_points, cone_graph, contains

__all__ = [
    "CalibratedSetSpec", "Cone", "ConfigError", "CustomG", "FGK", "GraphFunction", "HalfSpace", "JumpSegment",
    "MonotoneG", "PiecewiseLinear", "Rect", "RegionContainsInfinite", "RegionContainsJump", "Sampler",
    "SupportEscapesDomain", "TestFunctionFamily", "boundary_point", "boundary_points", "check_X2_monotone",
    "check_jump_condition", "check_level_set", "check_monotone_direction", "check_partial_lipschitz",
    "check_upper_semicontinuity", "check_zt_family", "cone_graph", "cone_inclusion", "contains", "dumps", "load",
    "loads", "pdi_distributional", "pdi_pointwise", "sample_cone_interior",
]
