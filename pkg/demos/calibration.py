"""
Calibrating the penalty constant
================================

The comparison penalty carries a constant that theory only bounds loosely.
We trace Monte Carlo risk over a grid of constants with common random
numbers and look for the flat stretch. Use fewer replications than the
published 50 for a quick run.
"""

import sys

from circeiv.experiments import GRID_CIRCULAR, calibrate_c0, cc_model

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 20
curve = calibrate_c0(cc_model(2.54), n=200, x=1.5, grid=GRID_CIRCULAR, reps=reps, seed=1)

print("c0        risk      se        plateau")
for g, r, s, p in zip(curve.grid, curve.risks, curve.std_errors, curve.plateau_mask):
    print("%-9g %.5f   %.5f   %s" % (g, r, s, "*" if p else ""))

# Flat stretches can also appear at tiny constants, where the penalty is too
# weak and the roughest level always wins; the useful one is the low-risk one.
stretch = []
for i, flag in enumerate(curve.plateau_mask + [False]):
    if flag:
        stretch.append(i)
    elif stretch:
        risks = [curve.risks[j] for j in stretch]
        print("flat stretch c0 in [%g, %g], risk %.4f..%.4f"
              % (curve.grid[stretch[0]], curve.grid[stretch[-1]], min(risks), max(risks)))
        stretch = []
print("0.08 inside a plateau:", curve.plateau_contains(0.08))
