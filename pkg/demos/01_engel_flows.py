"""
Flows and products in the Engel group
=====================================

Points are written in exponential coordinates of the second kind.  Flows of
left-invariant fields have closed forms, and the group product is built by
flowing along the factors of the second point.
"""

from fractions import Fraction

import numpy as np

from engel_normal import X1, X2, X3, X4, adjoint_exp, bracket, flow, inverse, multiply

# The only brackets are [X1, X2] = X3 and [X1, X3] = X4.
print("[X1, X2] =", bracket(X1, X2))
print("[X1, X3] =", bracket(X1, X3))

# Flowing along X2 from a point with x1 = 1 drags x3 and x4 along.
print("flow((1,0,0,0), X2, 2) =", flow((1, 0, 0, 0), X2, 2.0))

# Horizontal directions a X1 + X2 produce a cubic in the last coordinate.
print("flow(0, X1 + X2, 1) =", flow((0, 0, 0, 0), (1, 1, 0, 0), 1.0))

# Exact arithmetic goes through unchanged with fractions.
p = tuple(Fraction(k, 3) for k in (1, -2, 4, 5))
q = tuple(Fraction(k, 7) for k in (3, 1, -1, 2))
print("p q =", multiply(p, q))
print("p p^-1 =", multiply(p, inverse(p)))

# Conjugating X2 by exp(t X1) sweeps out X2 + t X3 + t^2/2 X4.
for t in np.linspace(-1, 1, 3):
    print(f"Ad_exp({t:+.1f} X1) X2 =", adjoint_exp(X1 * t, X2))
