"""
Probability of a wrong Y cascade as fakes become common
=======================================================

For a bad item (V=B) with p=0.7 we sweep the fake fraction and evaluate the
truncated recursion with 10 stages.  At every threshold the curve jumps down.
The jump size has a closed form.
"""

import numpy as np

from fakecascade import (
    ModelParams,
    Side,
    delta_r,
    epsilon_threshold,
    is_near_threshold,
    p_ycas_at_threshold,
    p_ycas_no_fakes,
    p_ycas_truncated,
)

p, v = 0.7, "B"
base = p_ycas_no_fakes(p, v).value
print(f"no fakes: P(Y cascade) = {base:.6f}")

for eps in np.r_[0.005, 0.01, 0.02, np.arange(0.05, 0.95, 0.05)]:
    if is_near_threshold(p, eps):
        continue
    est = p_ycas_truncated(ModelParams(p, eps, v), M=10)
    marker = " <- worse than no fakes" if est.value > base else ""
    print(f"eps={eps:.3f}  P={est.value:.5f}  (bound {est.error_bound:.1e}){marker}")

# %%
# The discontinuities
print()
for r in range(2, 7):
    e = epsilon_threshold(p, r)
    lo = p_ycas_at_threshold(p, r, v, Side.MINUS).value
    hi = p_ycas_at_threshold(p, r, v, Side.PLUS).value
    print(f"eps_{r}={e:.5f}: {lo:.5f} -> {hi:.5f}, relative drop {delta_r(p, r, v):.4f}")
