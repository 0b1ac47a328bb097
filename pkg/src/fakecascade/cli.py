"""Command-line front end; emits CSV (default) or JSON rows.

Examples::

    fakecascade derive --p 0.7 --eps 0.2 --v B
    fakecascade thresholds --p-grid 0.51:0.99:0.01 --r-max 6
    fakecascade curve --p 0.7 --v B --eps-grid 0.01:0.95:0.002 --stages 10
    fakecascade simulate --p 0.7 --eps 0.2 --v B --trials 1000000 --seed 42
    fakecascade limits --p-grid 0.51:0.99:0.01 --eps 0.9
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

from . import analytic_engine as ae
from .model_core import DomainError, ModelParams, Value, derive_params, eta_weight
from .monte_carlo import DEFAULT_HORIZON, estimate_p_ycas
from .thresholds import DEFAULT_TOL, epsilon_threshold, is_near_threshold, threshold_table

EXIT_USAGE = 2

Row = dict[str, Any]


class GridError(ValueError):
    pass


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` with ``stop`` included when it lands on the grid."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise GridError(f"grid must look like start:stop:step, got {text!r}") from None
    if not (step > 0) or stop < start or not all(map(math.isfinite, (start, stop, step))):
        raise GridError(f"empty or invalid grid {text!r}")
    n = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(n)]


def fmt(x: Any) -> Any:
    if isinstance(x, float):
        return f"{x:.12g}"
    return x


def _json_value(x: Any) -> Any:
    if isinstance(x, float):
        return float(f"{x:.12g}") if math.isfinite(x) else None
    return x


def render(rows: list[Row], columns: Sequence[str], form: str) -> str:
    if form == "json":
        return json.dumps([{c: _json_value(r[c]) for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_NONE)
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


PYCAS_COLUMNS = ("p", "eps", "V", "M", "p_ycas", "err_bound", "method")


def _est_row(p: float, eps: float, v: Value, est: ae.CascadeEstimate) -> Row:
    return {
        "p": p,
        "eps": eps,
        "V": v.value,
        "M": est.M,
        "p_ycas": est.value,
        "err_bound": est.error_bound,
        "method": est.method.value,
    }


def threshold_pair(p: float, r: int, v: Value) -> list[ae.CascadeEstimate]:
    sides = [ae.Side.PLUS] if r == 1 else [ae.Side.MINUS, ae.Side.PLUS]
    return [ae.p_ycas_at_threshold(p, r, v, s) for s in sides]


def pycas_rows(p: float, eps: float, v: Value, stages: int, tol: float) -> list[Row]:
    """Rows for one ``eps``; guard-band points yield the one-sided pair."""
    ModelParams(p, eps, v)
    if eps == 0.0:
        return [_est_row(p, eps, v, ae.p_ycas_no_fakes(p, v))]
    if is_near_threshold(p, eps, tol):
        r = round(1.0 / eta_weight(p, eps))
        return [_est_row(p, eps, v, est) for est in threshold_pair(p, r, v)]
    return [_est_row(p, eps, v, ae.p_ycas_truncated(ModelParams(p, eps, v), stages, tol))]


def cmd_derive(args) -> tuple[list[Row], Sequence[str]]:
    d = derive_params(ModelParams(args.p, args.eps, args.v))
    row = {"p": d.p, "eps": d.eps, "V": d.true_value.value, "a": d.a, "b": d.b,
           "eta": d.eta, "alpha": d.alpha, "p_f": d.p_f, "r": d.r}
    return [row], list(row)


def cmd_thresholds(args):
    rows = []
    for p in parse_grid(args.p_grid):
        for r, e in threshold_table(p, args.r_max).entries:
            rows.append({"p": p, "r": r, "eps_r": e})
    return rows, ("p", "r", "eps_r")


def cmd_pycas(args):
    return pycas_rows(args.p, args.eps, Value.parse(args.v), args.stages, args.tol), PYCAS_COLUMNS


_METHOD_ORDER = {
    ae.Method.BASELINE_EPS0.value: 0,
    ae.Method.THRESHOLD_MINUS.value: 1,
    ae.Method.RECURSION.value: 2,
    ae.Method.THRESHOLD_PLUS.value: 3,
}


def curve_rows(p: float, v: Value, grid: list[float], stages: int, tol: float) -> list[Row]:
    """Recursion over the grid with both one-sided values at every threshold crossed."""
    ModelParams(p, grid[0], v)
    ModelParams(p, grid[-1], v)
    rows = []
    crossed = set()
    for eps in grid:
        if eps == 0.0:
            rows.append(_est_row(p, eps, v, ae.p_ycas_no_fakes(p, v)))
            rows.append(_est_row(p, eps, v, ae.p_ycas_at_threshold(p, 1, v, ae.Side.PLUS)))
        elif is_near_threshold(p, eps, tol):
            crossed.add(round(1.0 / eta_weight(p, eps)))
        else:
            rows.append(_est_row(p, eps, v, ae.p_ycas_truncated(ModelParams(p, eps, v), stages, tol)))
    r = 2
    while (e_r := epsilon_threshold(p, r)) <= grid[-1]:
        if e_r >= grid[0]:
            crossed.add(r)
        r += 1
    for r in sorted(crossed - {1}):
        rows.extend(_est_row(p, epsilon_threshold(p, r), v, est) for est in threshold_pair(p, r, v))
    rows.sort(key=lambda row: (row["eps"], _METHOD_ORDER[row["method"]]))
    return rows


def cmd_curve(args):
    return curve_rows(args.p, Value.parse(args.v), parse_grid(args.eps_grid), args.stages, args.tol), PYCAS_COLUMNS


SIMULATE_COLUMNS = ("p", "eps", "V", "trials", "horizon", "seed", "y", "n", "undecided", "p_hat", "ci95")


def cmd_simulate(args):
    params = ModelParams(args.p, args.eps, args.v)
    res = estimate_p_ycas(params, args.trials, args.seed, args.horizon, args.workers)
    row = {
        "p": params.p, "eps": params.eps, "V": params.true_value.value,
        "trials": res.trials, "horizon": res.horizon, "seed": res.seed,
        "y": res.y_count, "n": res.n_count, "undecided": res.undecided_count,
        "p_hat": res.p_ycas_hat, "ci95": res.ci_halfwidth,
    }
    return [row], SIMULATE_COLUMNS


LIMITS_COLUMNS = ("p", "V", "p_ycas_eps0_formal", "p_ycas_lim_eps0", "p_ycas_lim_eps1", "p_ycas_at_eps")


def value_at(p: float, eps: float, v: Value, stages: int, tol: float) -> float:
    """Recursion value; on a threshold, the value just to its right."""
    if eps == 0.0:
        return ae.p_ycas_no_fakes(p, v).value
    if is_near_threshold(p, eps, tol):
        r = round(1.0 / eta_weight(p, eps))
        return ae.p_ycas_at_threshold(p, r, v, ae.Side.PLUS).value
    return ae.p_ycas_truncated(ModelParams(p, eps, v), stages, tol).value


def limits_rows(grid: list[float], eps: float, stages: int, tol: float) -> list[Row]:
    rows = []
    for p in grid:
        ModelParams(p, eps)
        for v in (Value.BAD, Value.GOOD):
            rows.append({
                "p": p,
                "V": v.value,
                "p_ycas_eps0_formal": ae.p_ycas_no_fakes(p, v).value,
                "p_ycas_lim_eps0": ae.p_ycas_limit_eps0(p, v).value,
                "p_ycas_lim_eps1": ae.p_ycas_limit_eps1(p, v).value,
                "p_ycas_at_eps": value_at(p, eps, v, stages, tol),
            })
    return rows


def cmd_limits(args):
    return limits_rows(parse_grid(args.p_grid), args.eps, args.stages, args.tol), LIMITS_COLUMNS


def cmd_find_eps_lower(args):
    v = Value.parse(args.v)
    ModelParams(args.p, 0.0, v)
    res = ae.find_eps_lower(args.p, v, args.grid_step, args.refine_tol, args.stages, args.tol)
    row = {"p": args.p, "V": v.value, "eps_lower": res.eps_lower,
           "status": "ok" if res.found else "no_crossing"}
    return [row], ("p", "V", "eps_lower", "status")


def _value_arg(text: str) -> str:
    try:
        return Value.parse(text).value
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="threshold guard band on |1/eta - r|")
    common.add_argument("--stages", type=int, default=ae.DEFAULT_STAGES, help="recursion depth M")

    parser = argparse.ArgumentParser(prog="fakecascade", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def point(sp, eps=True):
        sp.add_argument("--p", type=float, required=True)
        if eps:
            sp.add_argument("--eps", type=float, required=True)
        sp.add_argument("--v", type=_value_arg, default="B")

    sp = sub.add_parser("derive", parents=[common], help="derived model quantities")
    point(sp)
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("thresholds", parents=[common], help="eps_r table over a p grid")
    sp.add_argument("--p-grid", required=True)
    sp.add_argument("--r-max", type=int, default=6)
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("pycas", parents=[common], help="Y-cascade probability at one point")
    point(sp)
    sp.set_defaults(func=cmd_pycas)

    sp = sub.add_parser("curve", parents=[common], help="Y-cascade probability over an eps grid")
    point(sp, eps=False)
    sp.add_argument("--eps-grid", required=True)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate")
    point(sp)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("limits", parents=[common], help="eps -> 0 and eps -> 1 limits over a p grid")
    sp.add_argument("--p-grid", required=True)
    sp.add_argument("--eps", type=float, default=0.9)
    sp.set_defaults(func=cmd_limits)

    sp = sub.add_parser("find-eps-lower", parents=[common], help="largest eps range where fakes backfire")
    point(sp, eps=False)
    sp.add_argument("--grid-step", type=float, default=1e-3)
    sp.add_argument("--refine-tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_find_eps_lower)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.stages < 1:
            raise DomainError(f"--stages must be >= 1, got {args.stages}")
        if args.tol <= 0:
            raise DomainError(f"--tol must be positive, got {args.tol}")
        rows, columns = args.func(args)
    except ValueError as exc:
        print(f"fakecascade {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(rows, columns, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
