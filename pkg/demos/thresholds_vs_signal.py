"""
Where the fake fraction changes the cascade rule
================================================

A Y observation carries weight ``eta`` relative to an N.  Every time ``1/eta``
passes an integer, one more consecutive Y is needed to start a cascade.
The crossing points ``eps_r`` depend on the signal quality ``p``.
"""

import numpy as np

from fakecascade import epsilon_threshold, eta_weight, interval_index

ps = np.round(np.arange(0.55, 0.96, 0.05), 2)

# one row per p, one column per r
print("  p   " + "".join(f"   eps_{r}  " for r in range(1, 7)))
for p in ps:
    print(f"{p:.2f}  " + "".join(f"{epsilon_threshold(p, r):10.5f} " for r in range(1, 7)))

# a stronger signal gives an N more weight relative to a fake-diluted Y,
# so each threshold arrives earlier
print()
for p in (0.6, 0.9):
    eps = 0.5
    print(f"p={p}: eta({eps})={eta_weight(p, eps):.4f} -> {interval_index(p, eps) + 1} Y's start a cascade")
