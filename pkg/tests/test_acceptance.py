"""Acceptance checks, one test per criterion.

Every test prints a single ``criterion N PASS|FAIL`` line (visible even
under capture) and then asserts.  Run them alone with::

    pytest tests/test_acceptance.py -v
"""

import csv
import io
import math
import time

import numpy as np
import pytest

from fakecascade.analytic_engine import (
    Side,
    delta_r,
    p_ycas_at_threshold,
    p_ycas_limit_eps0,
    p_ycas_limit_eps1,
    p_ycas_no_fakes,
    p_ycas_truncated,
    persistence_factor,
)
from fakecascade.cli import main
from fakecascade.model_core import ModelParams, Value, derive_params, eta_weight
from fakecascade.monte_carlo import estimate_p_ycas, simulate_trial_agent_level, simulate_trial_walk_level, trial_rng
from fakecascade.thresholds import epsilon_threshold, is_near_threshold
from oracles import threshold_by_root

# slack for comparing two float64 sums of order one
ULPS = 8 * np.finfo(float).eps


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail, started, budget):
        elapsed = time.perf_counter() - started
        ok = ok and elapsed < budget
        with capsys.disabled():
            print(f"\ncriterion {n:2d} {'PASS' if ok else 'FAIL'}: {title} [{detail}; {elapsed:.2f}s of {budget}s]")
        assert ok, detail

    return emit


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_criterion_01_thresholds(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_eta = worst_root = 0.0
    for _ in range(1000):
        p = rng.uniform(0.501, 0.999)
        r = int(rng.integers(1, 11))
        e = epsilon_threshold(p, r)
        worst_eta = max(worst_eta, abs(eta_weight(p, e) - 1 / r))
        worst_root = max(worst_root, abs(e - threshold_by_root(p, r)))
    ok = worst_eta < 1e-10 and worst_root < 1e-10
    report(1, "eta(eps_r) = 1/r", ok, f"max |eta-1/r|={worst_eta:.1e}, max |eps-bisect|={worst_root:.1e}", t0, 1)


def test_criterion_02_baseline_gap(report):
    t0 = time.perf_counter()
    base = p_ycas_no_fakes(0.7, "B").value
    lim = p_ycas_limit_eps0(0.7, "B").value
    ok = abs(base - 0.155172) < 1e-6 and abs(lim - 0.137848) < 1e-6
    bad = [
        (p, v.value)
        for p in np.linspace(0.505, 0.995, 100)
        for v in Value
        if not p_ycas_limit_eps0(p, v).value < p_ycas_no_fakes(p, v).value
    ]
    ok = ok and not bad
    report(2, "baseline vs eps->0 limit", ok, f"baseline={base:.6f}, limit={lim:.6f}, violations={len(bad)}", t0, 1)


def test_criterion_03_recursion_vs_simulation(report):
    t0 = time.perf_counter()
    worst = 0.0
    for p in (0.6, 0.7, 0.85):
        for v in ("G", "B"):
            for eps in (0.1, 0.45):
                prm = ModelParams(p, eps, v)
                sim = estimate_p_ycas(prm, 1_000_000, seed=1)
                z = abs(p_ycas_truncated(prm, 40).value - sim.p_ycas_hat) / sim.stderr
                worst = max(worst, z)
    report(3, "recursion vs 1e6-trial simulation", worst < 3, f"max |diff|/se={worst:.2f} over 12 points", t0, 300)


def test_criterion_04_truncation_bound(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    n = violations = 0
    k_max = 0.0
    while n < 1000:
        p, eps, v = rng.uniform(0.501, 0.999), rng.uniform(1e-4, 0.999), ("G", "B")[n % 2]
        if is_near_threshold(p, eps):
            continue
        n += 1
        prm = ModelParams(p, eps, v)
        d = derive_params(prm)
        k = persistence_factor(d.r, d.p_f)
        k_max = max(k_max, k)
        ref = p_ycas_truncated(prm, 120).value
        for M in (5, 10, 20):
            gap = p_ycas_truncated(prm, M).value - ref
            if not (-ULPS <= gap <= k**M + ULPS):
                violations += 1
    preset = p_ycas_truncated(ModelParams(0.7, 0.2, "B"), 10).error_bound
    ok = violations == 0 and k_max <= 0.5 and preset < 1e-3
    report(4, "truncation bound", ok, f"violations={violations}, max k={k_max:.4f}, preset bound={preset:.2e}", t0, 10)


def test_criterion_05_discontinuity(report):
    t0 = time.perf_counter()
    worst_delta = worst_cont = 0.0
    for p in (0.6, 0.7, 0.8):
        for v in Value:
            for r in range(2, 9):
                minus = p_ycas_at_threshold(p, r, v, Side.MINUS).value
                plus = p_ycas_at_threshold(p, r, v, Side.PLUS).value
                worst_delta = max(worst_delta, abs((minus - plus) / minus - delta_r(p, r, v)))
                e = epsilon_threshold(p, r)
                below = p_ycas_truncated(ModelParams(p, e - 1e-7, v), 60).value
                above = p_ycas_truncated(ModelParams(p, e + 1e-7, v), 60).value
                worst_cont = max(worst_cont, abs(below - minus), abs(above - plus))
    ok = worst_delta < 1e-12 and worst_cont < 1e-4
    report(5, "jump law at thresholds", ok, f"max delta err={worst_delta:.1e}, max one-sided err={worst_cont:.1e}", t0, 5)


def test_criterion_06_eps_to_one(report):
    t0 = time.perf_counter()
    worst_form = worst_delta = 0.0
    for p in (0.6, 0.7, 0.8):
        for v in Value:
            lim = p_ycas_limit_eps1(p, v).value
            for side in Side:
                worst_form = max(worst_form, abs(p_ycas_at_threshold(p, 100, v, side).value - lim))
            worst_delta = max(worst_delta, delta_r(p, 100, v))
    g, b = p_ycas_limit_eps1(0.7, "G").value, p_ycas_limit_eps1(0.7, "B").value
    t_g, t_b = math.log(7 / 3) / (7 / 3 - 1), (7 / 3) * math.log(7 / 3) / (7 / 3 - 1)
    direct = abs(g - 1 / (math.exp(t_g) - t_g)) < 1e-3 and abs(b - 1 / (math.exp(t_b) - t_b)) < 1e-3
    named = abs(g - 0.7985) < 1e-3 and abs(b - 0.3422) < 1e-3
    ok = worst_form < 2e-2 and worst_delta < 1e-2 and direct and named
    detail = f"max |form-limit|={worst_form:.4f}, max delta_100={worst_delta:.5f}, lim G={g:.4f} B={b:.4f}"
    report(6, "eps->1 limit", ok, detail, t0, 1)


def test_criterion_07_coupling(report):
    t0 = time.perf_counter()
    points = [(0.7, 0.2, "B"), (0.7, 0.2, "G"), (0.6, 0.45, "B"), (0.85, 0.1, "G"), (0.7, 0.0, "B"), (0.9, 0.7, "G")]
    mismatches = 0
    for p, eps, v in points:
        prm = ModelParams(p, eps, v)
        for i in range(10_000):
            a = simulate_trial_agent_level(prm, trial_rng(31, i))
            w = simulate_trial_walk_level(prm, trial_rng(31, i))
            mismatches += a != w
    report(7, "agent-level and walk-level trials coincide", mismatches == 0, f"mismatches={mismatches} of 60000", t0, 10)


def test_criterion_08_absorption(report):
    t0 = time.perf_counter()
    res = estimate_p_ycas(ModelParams(0.7, 0.2, "B"), 1_000_000, seed=5, horizon=10_000)
    frac = res.undecided_fraction
    report(8, "absorption by horizon 1e4", frac < 1e-4, f"undecided fraction={frac:.1e}", t0, 120)


def test_criterion_09_reproducibility(report, capsys):
    t0 = time.perf_counter()
    argv = ["simulate", "--p", "0.7", "--eps", "0.2", "--v", "B", "--trials", "200000", "--seed", "42"]
    outs = []
    for extra in ([], [], ["--workers", "2"], ["--workers", "4"]):
        assert main(argv + extra) == 0
        outs.append(capsys.readouterr().out.encode())
    ok = len(set(outs)) == 1 and len(outs[0]) > 0
    report(9, "byte-identical simulate output", ok, f"{len(set(outs))} distinct outputs from 4 runs", t0, 60)


def test_criterion_10_figure_data(report, capsys):
    t0 = time.perf_counter()
    problems = []

    main(["thresholds", "--p-grid", "0.51:0.99:0.01", "--r-max", "6"])
    rows = csv_rows(capsys.readouterr().out)
    by_p = {}
    for r in rows:
        by_p.setdefault(r["p"], []).append(float(r["eps_r"]))
    if not rows or any(any(x >= y for x, y in zip(e, e[1:])) for e in by_p.values()):
        problems.append("thresholds")

    main(["curve", "--p", "0.7", "--v", "B", "--eps-grid", "0.01:0.95:0.002", "--stages", "10"])
    rows = csv_rows(capsys.readouterr().out)
    minus = {r["eps"]: float(r["p_ycas"]) for r in rows if r["method"] == "ClosedFormThresholdMinus"}
    plus = {r["eps"]: float(r["p_ycas"]) for r in rows if r["method"] == "ClosedFormThresholdPlus"}
    if not rows or not minus or minus.keys() != plus.keys() or any(minus[e] <= plus[e] for e in minus):
        problems.append("curve")

    main(["limits", "--p-grid", "0.51:0.99:0.01"])
    rows = csv_rows(capsys.readouterr().out)
    if not rows or any(float(r["p_ycas_lim_eps0"]) >= float(r["p_ycas_eps0_formal"]) for r in rows):
        problems.append("limits")

    detail = f"{len(minus)} threshold pairs in curve; failing outputs: {problems or 'none'}"
    report(10, "figure data regeneration", not problems, detail, t0, 60)
