"""
Checking the recursion against brute-force simulation
======================================================

A million simulated agent chains per point, compared with the truncated
recursion.  The z column is the difference in standard errors.
"""

from fakecascade import ModelParams, estimate_p_ycas, find_eps_lower, p_ycas_no_fakes, p_ycas_truncated

for p, eps, v in [(0.7, 0.2, "B"), (0.7, 0.2, "G"), (0.6, 0.45, "B"), (0.85, 0.1, "G")]:
    prm = ModelParams(p, eps, v)
    exact = p_ycas_truncated(prm).value
    sim = estimate_p_ycas(prm, 1_000_000, seed=42)
    print(f"p={p} eps={eps} V={v}: recursion {exact:.5f}  simulated {sim.p_ycas_hat:.5f}"
          f"  z={(sim.p_ycas_hat - exact) / sim.stderr:+.2f}")

# %%
# Below eps_lower a sprinkling of fakes helps: the wrong cascade gets rarer
res = find_eps_lower(0.7, "B")
half = res.eps_lower / 2
sim = estimate_p_ycas(ModelParams(0.7, half, "B"), 1_000_000, seed=7)
print(f"\neps_lower(0.7, B) = {res.eps_lower:.4f}")
print(f"at eps={half:.4f}: simulated {sim.p_ycas_hat:.5f} +- {sim.ci_halfwidth:.5f}"
      f" vs fake-free {p_ycas_no_fakes(0.7, 'B').value:.5f}")
