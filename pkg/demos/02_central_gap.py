"""
Covering the gap around pi/4
============================

The region ladder never reaches pi/4.  A Bell pair covers what is left,
either deterministically with slightly imperfect fidelity or exactly with
some probability of failure.
"""
import math

import numpy as np

from rspsim import TargetQubit, run_appendixB_central, run_improved1_central
from rspsim.regionsched import QUARTER_PI, schedule_value

q, depth = 0.95, 20
g = schedule_value(q, depth)
print(f"gap: [{QUARTER_PI - g:.6f}, {QUARTER_PI + g:.6f}]")

thetas = np.linspace(QUARTER_PI - g, QUARTER_PI + g, 5)

# deterministic: branch 1 delivers the partner state, overlap sin(2 theta)
print("\ndeterministic fallback")
for t in thetas:
    out = run_improved1_central(TargetQubit(float(t), 1.0), q, depth)
    print(f"  theta={t:.6f}  worst overlap={out.report.simulated_fidelity:.9f}"
          f"  sin(2 theta)={math.sin(2 * t):.9f}")
print(f"  guaranteed floor: {out.details['fidelity_bound']:.9f}")

# probabilistic: Bob filters the partner branch and keeps only exact hits
print("\nfiltered, exact on success")
for t in thetas:
    out = run_appendixB_central(TargetQubit(float(t), 1.0), q, depth)
    print(f"  theta={t:.6f}  success={out.success_probability:.9f}"
          f"  worst overlap={out.report.worst_case_fidelity:.12f}")
print(f"  guaranteed success: {out.details['min_success_bound']:.9f}")
