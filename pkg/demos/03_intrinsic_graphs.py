"""
Intrinsic graphs over the vertical plane
========================================

Seen along a horizontal direction ``a X1 + X2``, a calibrated set is the
region above a function ``T`` on ``W = {x2 = 0}``.  For the cone ``T`` is a
root of a quartic.  It is continuous but grows like ``|p4|^(1/3)``, so it
is not Lipschitz; a jump in ``g`` makes ``T`` jump too.
"""

import numpy as np

from engel_normal.calibrated import Cone, PiecewiseLinear
from engel_normal.intrinsic import (
    IntrinsicGraphQuery,
    cone_T_closed_form,
    demonstrate_discontinuity,
    holder_constant,
    intrinsic_T,
    lipschitz_blowup_exponent,
)

q = IntrinsicGraphQuery(Cone(), 1.0, (0.0, 0.0, 0.0, -1 / 24))
print("T by bisection :", intrinsic_T(q))
print("T closed form  :", cone_T_closed_form(1.0, 0.0, -1 / 24))

fit = lipschitz_blowup_exponent(1.0, -np.logspace(-1, -6, 11))
print(f"T ~ {fit.prefactor:.4f} |p4|^{fit.slope:.4f}")
for p4, T in zip(fit.p4[::5], fit.T[::5]):
    print(f"  p4 = {p4:.0e}: T / |p4| = {T / abs(p4):.3e}")

# Dilations act by (p3, p4) -> (l^2 p3, l^3 p4), so the best Hoelder constant
# is a maximum over the unit gauge sphere.
for a in (0.5, 1.0, 2.0):
    K, arg = holder_constant(a)
    print(f"K*({a}) = {K:.12f} attained at (p3, p4) = {arg}")

rep = demonstrate_discontinuity(PiecewiseLinear.step([0.25], [1.0, 0.0]))
for j in rep.jumps:
    print(f"T jumps by {j.size:.6f} at p4 = {j.location:.10f}")
