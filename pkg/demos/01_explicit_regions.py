"""
One classical bit and a ladder of weakly entangled channels
===========================================================

Split [0, pi/2] into regions, give each region its own channel, and watch
Bob's fidelity sweep between q and 1 inside every region.
"""
import math

import numpy as np

from rspsim import TargetQubit, run_explicit
from rspsim.regionsched import LOWER, RegionIndex, make_schedule, region_interval

q = 0.95
sched = make_schedule(q, 6)
print("schedule A_n:", np.round(sched.values, 5))
print(f"central gap half-width A_6 = {sched.gap:.5f}")

# each lower region n runs from pi/4 - A_n up to pi/4 - A_{n+1}
for n in range(4):
    region = RegionIndex(LOWER, n)
    lo, hi = region_interval(region, q)
    thetas = np.linspace(lo, hi, 7)
    fids = [run_explicit(TargetQubit(float(t), 0.3), q, 6, region=region).report.simulated_fidelity
            for t in thetas]
    print(f"region {n}: theta in [{lo:.4f}, {hi:.4f}]  F =", np.round(fids, 4))

# the left edge of every region sits exactly at q, the right edge at 1
out = run_explicit(TargetQubit(0.0, 0.0), q, 6)
print(f"\ntheta = 0      -> F = {out.report.simulated_fidelity:.12f}")
out = run_explicit(TargetQubit(math.pi / 4 - sched.values[1], 0.0), q, 6)
print(f"theta = edge 1 -> F = {out.report.simulated_fidelity:.12f}")

# the ancilla is what kills the off-diagonal term in the {phi, phi_bar} basis
c = out.details["coefficients"]
print("rho_B in target basis:\n", np.round(c, 12))
