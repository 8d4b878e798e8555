"""
Lipschitz graphs in a rotated frame
===================================

Along a direction ``w`` strictly inside the cone ``C`` every calibrated
boundary is a Euclidean Lipschitz graph over the orthogonal hyperplane, with
constant ``cot`` of the largest circular cone around ``w`` that fits in ``C``.
"""

from engel_normal.calibrated import Cone, HalfSpace, MonotoneG, PiecewiseLinear
from engel_normal.rectifiability import GraphingDirection, MonotoneFrame, extract_rotated_graph, half_space_reduction_X1

w = GraphingDirection((0.0, 1.0, 0.0, 1.0))
print("w =", w.w, " Lipschitz bound =", w.lipschitz_bound())
print("monotone frame determinant:", MonotoneFrame().determinant)

for name, spec in {
    "cone": Cone(),
    "tilted half-space": HalfSpace((0, 1, 1, 1), 0.2),
    "step g": MonotoneG(PiecewiseLinear.step([0.0], [0.5, -0.5])),
}.items():
    g = extract_rotated_graph(spec, w, n=25)
    print(f"{name:>18}: L_hat = {g.L_hat:.8f}, cone avoidance violations = {g.cone_report.n_violations}")

# If X1 were the normal, conjugation would force X3 and X4 to be invariant.
print(half_space_reduction_X1().summary())
