"""
Cascade probability in the two extreme regimes
==============================================

Very rare fakes still leave a gap below the fake-free value, and as fakes
take over the probability settles to ``1/(e^t - t)``.  The table compares
both limits with the fake-free value and with ``eps = 0.9``.
"""

import numpy as np

from fakecascade import (
    ModelParams,
    is_near_threshold,
    p_ycas_limit_eps0,
    p_ycas_limit_eps1,
    p_ycas_no_fakes,
    p_ycas_truncated,
)

print(" p    V   eps=0     eps->0    eps=0.9   eps->1")
for p in np.round(np.arange(0.55, 0.96, 0.05), 2):
    for v in ("B", "G"):
        at = float("nan") if is_near_threshold(p, 0.9) else p_ycas_truncated(ModelParams(p, 0.9, v)).value
        print(
            f"{p:.2f}  {v}  {p_ycas_no_fakes(p, v).value:.5f}  {p_ycas_limit_eps0(p, v).value:.5f}"
            f"  {at:.5f}  {p_ycas_limit_eps1(p, v).value:.5f}"
        )
