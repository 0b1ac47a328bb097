"""Fake-probability thresholds and the stage sequence driving the recursion.

For ``eps`` in ``[eps_r, eps_{r+1})`` a Y cascade from state 0 needs exactly
``r + 1`` consecutive ``Y`` observations.  Exactly at a threshold ``1/eta`` is
an integer and the stage enumeration breaks down, so such points sit inside a
guard band and are refused by :func:`stage_sequence`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model_core import DerivedParams, DomainError, eta_weight

DEFAULT_TOL = 1e-9
_TIE_BAND = 1e-9


class GuardBandError(ValueError):
    """Raised when ``eps`` sits within the guard band of some threshold."""


def _check_p(p: float) -> None:
    if not (0.5 < p < 1.0):
        raise DomainError(f"signal quality p must lie in (0.5, 1), got {p}")


def epsilon_threshold(p: float, r: int) -> float:
    """Smallest ``eps`` at which ``eta(p, eps) = 1/r``.

    >>> epsilon_threshold(0.7, 1)
    0.0
    """
    _check_p(p)
    if r < 1:
        raise DomainError(f"threshold index must be >= 1, got {r}")
    alpha = p / (1.0 - p)
    root = alpha ** (1.0 / r)
    return (alpha - root) / (alpha * root - 1.0)


@dataclass(frozen=True)
class ThresholdTable:
    p: float
    entries: list[tuple[int, float]]


def threshold_table(p: float, r_max: int) -> ThresholdTable:
    if r_max < 1:
        raise DomainError(f"r_max must be >= 1, got {r_max}")
    entries = []
    for r in range(1, r_max + 1):
        e = epsilon_threshold(p, r)
        if e > 1.0 - 1e-12:
            break
        entries.append((r, e))
    return ThresholdTable(p=p, entries=entries)


def interval_index(p: float, eps: float) -> int:
    """The ``r`` with ``eps_r <= eps < eps_{r+1}``, i.e. ``floor(1/eta)``."""
    _check_p(p)
    if not (0.0 <= eps < 1.0):
        raise DomainError(f"fake probability eps must lie in [0, 1), got {eps}")
    inv = 1.0 / eta_weight(p, eps)
    n = round(inv)
    if abs(inv - n) < _TIE_BAND:
        # floor(1/eta) can land one off when eps sits on a threshold; the
        # closed-form threshold decides which side
        return max(1, n if eps >= epsilon_threshold(p, n) else n - 1)
    return max(1, math.floor(inv))


def is_near_threshold(p: float, eps: float, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise DomainError(f"guard tolerance must be positive, got {tol}")
    inv = 1.0 / eta_weight(p, eps)
    return abs(inv - round(inv)) < tol


@dataclass(frozen=True)
class StageSequence:
    r_values: list[int]
    positions: list[float]

    @property
    def M(self) -> int:
        return len(self.r_values)


def stage_sequence(d: DerivedParams, M: int, tol: float = DEFAULT_TOL) -> StageSequence:
    """Consecutive-``Y`` requirements ``r_1 .. r_M`` for the Y-cascade stages.

    Stage 1 needs ``r + 1`` Y's.  Each non-terminating stage contributes
    ``r_n`` Y's and one N and leaves the walk in ``[0, eta]``; the next stage
    needs ``r`` Y's if ``r * eta`` more would clear the right wall, ``r + 1``
    otherwise.  Positions are rebuilt from integer cumulative sums so they do
    not drift over long sequences.
    """
    if M < 1:
        raise DomainError(f"number of stages must be >= 1, got {M}")
    if is_near_threshold(d.p, d.eps, tol):
        raise GuardBandError(
            f"eps={d.eps!r} is within {tol:g} of a threshold at p={d.p!r}; "
            "use the one-sided closed forms"
        )
    r, eta = d.r, d.eta
    r_values = [r + 1]
    total = r + 1
    positions = [total * eta - 1]
    for n in range(2, M + 1):
        rn = r if positions[-1] + r * eta > 1.0 else r + 1
        r_values.append(rn)
        total += rn
        positions.append(total * eta - n)
    return StageSequence(r_values=r_values, positions=positions)
