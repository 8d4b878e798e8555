"""Sets with constant horizontal normal in the Engel group."""

from .core import (
    BASIS, ORIGIN, X1, X2, X3, X4, BasisChange, Point, TangentVector, adjoint_exp, bracket, exp_point,
    exp_point_many, flow, flow_many, inverse, multiply, multiply_many, normalize_normal, zt_direction,
)
from .reports import ValidationReport
from .tolerances import DEFAULT, Tolerances

__version__ = "0.1.0"
