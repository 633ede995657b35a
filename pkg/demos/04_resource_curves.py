"""
How many channels for a given q
===============================

Closed-form channel counts against q.  Writes curve CSVs next to this
script; plot them with whatever tool is at hand.
"""
from pathlib import Path

import numpy as np

from rspsim import appendixA_depth, appendixB_depth, improved1_depth, sweep_curve

qs = (0.90, 0.95, 0.98, 0.99)
print("N for 1 - 10^-m accuracy")
for m in (2, 4, 6):
    print(f"  m={m}:", "  ".join(f"{appendixA_depth(q, m):7.2f}" for q in qs))

print("N+1, deterministic Bell-pair fallback")
for f in (0.99, 0.999, 0.9999):
    print(f"  F={f}:", "  ".join(f"{improved1_depth(q, f) + 1:7.2f}" for q in qs))

print("N+1, filtered fallback")
for f in (0.97, 0.99):
    print(f"  F={f}:", "  ".join(f"{appendixB_depth(q, f) + 1:7.2f}" for q in qs))

out = Path(__file__).with_name("curves")
out.mkdir(exist_ok=True)
for kind, kw in [("appendixA", {"m": 2}), ("improved1", {"f_min": 0.99}), ("appendixB", {"f_min": 0.99})]:
    tab = sweep_curve(kind, q_range=(0.51, 0.99), samples=100, **kw)
    np.savetxt(out / f"{kind}.csv", tab, delimiter=",", header="q,N", comments="", fmt="%.6f")
    print(f"wrote {out / (kind + '.csv')}  (N from {tab[0, 1]:.2f} to {tab[-1, 1]:.2f})")
