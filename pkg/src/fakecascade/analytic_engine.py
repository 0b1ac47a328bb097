"""Y-cascade probability: truncated stage recursion, closed forms and limits."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .model_core import DomainError, ModelParams, Value, derive_params
from .thresholds import DEFAULT_TOL, epsilon_threshold, is_near_threshold, stage_sequence

DEFAULT_STAGES = 40
# ten stages keep the error bound below 1e-3 across the p = 0.7 curve
PRESET_STAGES = 10


class Method(enum.Enum):
    RECURSION = "Recursion"
    THRESHOLD_PLUS = "ClosedFormThresholdPlus"
    THRESHOLD_MINUS = "ClosedFormThresholdMinus"
    BASELINE_EPS0 = "BaselineEpsZero"
    LIMIT_EPS0 = "LimitEpsToZero"
    LIMIT_EPS1 = "LimitEpsToOne"


class Side(enum.Enum):
    PLUS = "Plus"
    MINUS = "Minus"


@dataclass(frozen=True)
class CascadeEstimate:
    value: float
    error_bound: float
    method: Method
    M: int = 0

    @property
    def lower(self) -> float:
        return max(0.0, self.value - self.error_bound)


def persistence_factor(r: int, p_f: float) -> float:
    """Probability ``(r+1)(1-p_f)p_f^r`` bounding one more surviving stage."""
    return (r + 1) * (1.0 - p_f) * p_f**r


def _p_f(p: float, eps: float, v: Value) -> float:
    return p + (1.0 - p) * eps if v is Value.GOOD else 1.0 - p * (1.0 - eps)


def p_ycas_truncated(params: ModelParams, M: int = DEFAULT_STAGES, tol: float = DEFAULT_TOL) -> CascadeEstimate:
    """Upper bound on the Y-cascade probability after ``M`` stages.

    Sets ``S_{M+1} = 1`` and runs ``S_n = p_f^{r_n} [1 + r_n (1 - p_f) S_{n+1}]``
    backward to ``S_1``.  The true probability lies in
    ``[value - k**M, value]`` with ``k = (r+1)(1-p_f)p_f^r``.

    Raises
    ------
    DomainError
        if ``eps == 0`` (use :func:`p_ycas_no_fakes`).
    GuardBandError
        if ``eps`` is within ``tol`` of a threshold.
    """
    if params.eps == 0.0:
        raise DomainError("eps = 0 sits on the first threshold; use p_ycas_no_fakes")
    d = derive_params(params)
    stages = stage_sequence(d, M, tol)
    p_f, q = d.p_f, 1.0 - d.p_f
    s = 1.0
    for rn in reversed(stages.r_values):
        s = p_f**rn * (1.0 + rn * q * s)
    k = persistence_factor(d.r, p_f)
    return CascadeEstimate(value=s, error_bound=k**M, method=Method.RECURSION, M=M)


def p_wrong_cascade(params: ModelParams, M: int = DEFAULT_STAGES, tol: float = DEFAULT_TOL) -> CascadeEstimate:
    """Probability of herding on the wrong action.

    For a bad item that is the Y cascade itself; for a good one it is the
    complementary N cascade, since absorption happens almost surely.
    """
    est = p_ycas_truncated(params, M, tol)
    if params.true_value is Value.BAD:
        return est
    return CascadeEstimate(value=1.0 - est.value, error_bound=est.error_bound, method=est.method, M=M)


def p_ycas_at_threshold(p: float, r: int, v: Value | str, side: Side | str) -> CascadeEstimate:
    """One-sided limits of the Y-cascade probability at ``eps_r``."""
    v = Value.parse(v)
    side = Side(side) if not isinstance(side, Side) else side
    if r < 1:
        raise DomainError(f"threshold index must be >= 1, got {r}")
    if side is Side.MINUS and r == 1:
        raise DomainError("eps_1 = 0 has no left-hand side inside the domain")
    p_f = _p_f(p, epsilon_threshold(p, r), v)
    q = 1.0 - p_f
    x = q * p_f**r
    if side is Side.PLUS:
        value = p_f ** (r + 1) * (1.0 + x) / (1.0 - r * x)
        method = Method.THRESHOLD_PLUS
    else:
        value = p_f**r / (1.0 - r * x)
        method = Method.THRESHOLD_MINUS
    return CascadeEstimate(value=value, error_bound=0.0, method=method)


def delta_r(p: float, r: int, v: Value | str) -> float:
    """Relative drop of the Y-cascade probability as ``eps`` crosses ``eps_r``."""
    p_f = _p_f(p, epsilon_threshold(p, r), Value.parse(v))
    return (1.0 - p_f) * (1.0 - p_f ** (r + 1))


def p_ycas_no_fakes(p: float, v: Value | str) -> CascadeEstimate:
    p_f = p if Value.parse(v) is Value.GOOD else 1.0 - p
    value = p_f**2 / (p_f**2 + (1.0 - p_f) ** 2)
    return CascadeEstimate(value=value, error_bound=0.0, method=Method.BASELINE_EPS0)


def p_ycas_limit_eps0(p: float, v: Value | str) -> CascadeEstimate:
    """Right-hand limit at ``eps -> 0``; strictly below the ``eps = 0`` value."""
    lead = p**2 if Value.parse(v) is Value.GOOD else (1.0 - p) ** 2
    x = p * (1.0 - p)
    return CascadeEstimate(value=lead * (1.0 + x) / (1.0 - x), error_bound=0.0, method=Method.LIMIT_EPS0)


def limit_exponent(p: float, v: Value | str) -> float:
    alpha = p / (1.0 - p)
    scale = 1.0 if Value.parse(v) is Value.GOOD else alpha
    return scale * math.log(alpha) / (alpha - 1.0)


def p_ycas_limit_eps1(p: float, v: Value | str) -> CascadeEstimate:
    """Limit as fake agents take over: ``1 / (e^t - t)``."""
    t = limit_exponent(p, v)
    return CascadeEstimate(value=1.0 / (math.exp(t) - t), error_bound=0.0, method=Method.LIMIT_EPS1)


class EpsLower(NamedTuple):
    eps_lower: float
    found: bool


def find_eps_lower(
    p: float,
    v: Value | str,
    grid_step: float = 1e-3,
    refine_tol: float = 1e-9,
    M: int = DEFAULT_STAGES,
    tol: float = DEFAULT_TOL,
) -> EpsLower:
    """Estimate how far fake agents can grow before they stop hurting a Y cascade.

    Scans ``eps = grid_step, 2*grid_step, ...`` for the first point where the
    recursion reaches the no-fake probability, then bisects between it and the
    previous grid point.  The probability is discontinuous in ``eps``, so the
    result is only as good as the grid: a crossing narrower than one step can
    be missed.  Returns ``found=False`` with the last scanned ``eps`` if the
    probability never reaches the baseline.
    """
    if grid_step <= 0 or refine_tol <= 0:
        raise DomainError("grid_step and refine_tol must be positive")
    v = Value.parse(v)
    target = p_ycas_no_fakes(p, v).value

    def reaches(eps: float) -> bool:
        return p_ycas_truncated(ModelParams(p, eps, v), M, tol).value >= target

    lo = 0.0
    last = 0.0
    n = 1
    while True:
        eps = n * grid_step
        if eps >= 1.0:
            return EpsLower(last, False)
        n += 1
        if is_near_threshold(p, eps, tol):
            continue
        last = eps
        if not reaches(eps):
            lo = eps
            continue
        hi = eps
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            if mid == 0.0 or is_near_threshold(p, mid, tol):
                # nudging off the guard band keeps bisection on valid points
                mid = min(hi, mid + 2 * tol)
                if mid >= hi:
                    break
            if reaches(mid):
                hi = mid
            else:
                lo = mid
        return EpsLower(hi, True)
