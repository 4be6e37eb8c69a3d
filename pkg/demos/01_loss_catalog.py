"""
The loss catalog
================

Every loss in the catalog is an even function phi with phi(0) = 0 that
grows slower than a parabola for large residuals, plus a weight function
delta(e) = phi'(e) / e that the solver uses to downweight samples.  This
script tabulates both on a residual grid so the shapes are easy to compare.
"""

import numpy as np

from relf import LossSpec, delta, phi
from relf.losses import KINDS, SCALED_KINDS

residuals = np.array([0.0, 0.5, 1.0, 2.0, 4.0, 8.0])

print("phi(e) at unit scale")
print(f"{'e':>6} " + " ".join(f"{k:>10}" for k in KINDS))
for e in residuals:
    row = " ".join(f"{phi(LossSpec(k), e):10.4f}" for k in KINDS)
    print(f"{e:6.1f} {row}")

print()
print("delta(e) = phi'(e)/e  (the IRLS sample weight)")
print(f"{'e':>6} " + " ".join(f"{k:>10}" for k in KINDS))
for e in residuals:
    row = " ".join(f"{delta(LossSpec(k), e):10.4f}" for k in KINDS)
    print(f"{e:6.1f} {row}")

# welsch redescends (weight -> 0), the convex kinds only flatten: that is
# the whole robustness story in one column comparison
print()
print("effect of the scale parameter on welsch's weight at e = 3")
for scale in (0.5, 1.0, 2.0, 4.0):
    print(f"  scale {scale:3.1f}: delta = {delta(LossSpec('welsch', scale), 3.0):.6f}")

print()
print(f"scaled kinds: {', '.join(SCALED_KINDS)}; the rest have a fixed shape")
