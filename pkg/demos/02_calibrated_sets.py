"""
Calibrated sets and their falsifiers
====================================

A set ``{x2 > G(x3, x4)}`` is monotone along ``X2`` exactly when a family of
flow tests passes; for smooth ``G`` this is the inequality
``(d3 G)^2 + 2 d4 G <= 0``.  Both views are checked here on a few examples.
"""

import numpy as np

from engel_normal.calibrated import (
    FGK,
    Cone,
    MonotoneG,
    PiecewiseLinear,
    Sampler,
    TestFunctionFamily,
    check_X2_monotone,
    check_zt_family,
    pdi_distributional,
    pdi_pointwise,
)

region = (-2.0, 2.0, 0.5, 4.0)
sampler = Sampler(n_points=5000, seed=1)

examples = {
    "cone": Cone(),
    "step g": MonotoneG(PiecewiseLinear.step([1.0], [0.5, -0.5])),
    "FGK, K = 1": FGK(PiecewiseLinear.linear(1.5), PiecewiseLinear.linear(-0.2), 1.0),
    "increasing g": MonotoneG(PiecewiseLinear.linear(0.7)),
}

for name, spec in examples.items():
    flow_rep = check_X2_monotone(spec, sampler)
    zt_rep = check_zt_family(spec, Sampler(n_points=500, seed=2))
    print(f"{name:>14}: X2 flow {flow_rep.n_violations:5d} violations, Zt family {zt_rep.n_violations:5d}")

# The cone saturates the inequality: the residual vanishes everywhere.
rep = pdi_pointwise(Cone().graph, region)
print("cone pointwise residual:", rep.metrics["max_abs_residual"])

# With jumps the weak form is used, integrating G against smooth bumps.
fam = TestFunctionFamily.random(region, 60, seed=3)
for name in ("step g", "increasing g"):
    rep = pdi_distributional(examples[name].graph, fam)
    print(f"{name}: weak residual max {rep.metrics['max_residual']:+.3e}, passed={rep.passed}")

# A slope above 2/K^2 breaks the FGK family.
bad = FGK(PiecewiseLinear.linear(4.0), PiecewiseLinear.constant(0.0), 1.0)
print("steep FGK pointwise residual:", pdi_pointwise(bad.graph, region, n=11).metrics["max_residual"])
print("steep FGK admissibility:", bad.check().summary())
good = pdi_pointwise(examples["FGK, K = 1"].graph, region)
print(f"FGK, K = 1 pointwise residual max {good.metrics['max_residual']:+.3e} ({good.metrics['nonsmooth_points']} kink points skipped)")
