"""Model parameters, the Bayes decision rule and the sufficient-statistic walk.

Agents arrive one at a time, each receiving a binary private signal whose
quality is ``p``.  With probability ``eps`` an agent is fake and reports a
``Y`` regardless of anything else.  Before a cascade starts the public history
is summarised by ``h = eta * n_Y - n_N``; a cascade starts as soon as ``h``
leaves ``[-1, 1]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class DomainError(ValueError):
    """Raised when parameters fall outside the model domain."""


class Value(enum.Enum):
    GOOD = "G"
    BAD = "B"

    @classmethod
    def parse(cls, v: "Value | str") -> "Value":
        if isinstance(v, cls):
            return v
        key = str(v).strip().upper()
        aliases = {"G": cls.GOOD, "GOOD": cls.GOOD, "B": cls.BAD, "BAD": cls.BAD}
        if key not in aliases:
            raise DomainError(f"true value must be G or B, got {v!r}")
        return aliases[key]


class Signal(enum.Enum):
    H = "H"
    L = "L"


class Observation(enum.Enum):
    Y = "Y"
    N = "N"


class Status(enum.Enum):
    UNDECIDED = "Undecided"
    Y_CASCADE = "YCascade"
    N_CASCADE = "NCascade"


@dataclass(frozen=True)
class ModelParams:
    """Signal quality ``p``, fake-agent probability ``eps`` and the true value."""

    p: float
    eps: float
    true_value: Value = Value.BAD

    def __post_init__(self):
        if not (0.5 < self.p < 1.0):
            raise DomainError(f"signal quality p must lie in (0.5, 1), got {self.p}")
        if not (0.0 <= self.eps < 1.0):
            raise DomainError(f"fake probability eps must lie in [0, 1), got {self.eps}")
        object.__setattr__(self, "true_value", Value.parse(self.true_value))


@dataclass(frozen=True)
class DerivedParams:
    p: float
    eps: float
    true_value: Value
    a: float  # P(O=Y | G) before a cascade
    b: float  # P(O=N | B) before a cascade
    eta: float
    alpha: float
    p_f: float  # P(O=Y | true_value) before a cascade
    r: int


def eta_weight(p: float, eps: float) -> float:
    """Information weight of a ``Y`` observation relative to an ``N``."""
    a = p + (1.0 - p) * eps
    b = p * (1.0 - eps)
    return math.log(a / (1.0 - b)) / math.log(p / (1.0 - p))


def derive_params(params: ModelParams) -> DerivedParams:
    p, eps = params.p, params.eps
    a = p + (1.0 - p) * eps
    b = p * (1.0 - eps)
    eta = eta_weight(p, eps)
    p_f = a if params.true_value is Value.GOOD else 1.0 - b
    # local import: thresholds depends on this module
    from .thresholds import interval_index

    return DerivedParams(
        p=p,
        eps=eps,
        true_value=params.true_value,
        a=a,
        b=b,
        eta=eta,
        alpha=p / (1.0 - p),
        p_f=p_f,
        r=interval_index(p, eps),
    )


@dataclass(frozen=True)
class Decision:
    action: Observation
    cascading: bool


def decide(h: float, signal: Signal) -> Decision:
    """Bayes-optimal action of an ordinary agent given the history statistic.

    The cascade conditions are strict, so at ``h = +-1`` the agent is
    indifferent for one of its signals and follows it.
    """
    if h > 1.0:
        return Decision(Observation.Y, True)
    if h < -1.0:
        return Decision(Observation.N, True)
    return Decision(Observation.Y if signal is Signal.H else Observation.N, False)


@dataclass(frozen=True)
class WalkState:
    h: float = 0.0
    status: Status = Status.UNDECIDED
    steps: int = 0

    @property
    def absorbed(self) -> bool:
        return self.status is not Status.UNDECIDED


def walk_update(state: WalkState, obs: Observation, d: DerivedParams) -> WalkState:
    """Advance the history walk by one observation; absorbed states are frozen."""
    if state.absorbed:
        return replace(state, steps=state.steps + 1)
    h = state.h + d.eta if obs is Observation.Y else state.h - 1.0
    if h > 1.0:
        status = Status.Y_CASCADE
    elif h < -1.0:
        status = Status.N_CASCADE
    else:
        status = Status.UNDECIDED
    return WalkState(h=h, status=status, steps=state.steps + 1)


def likelihood_from_h(h: float, p: float) -> tuple[float, float]:
    """Return ``(l, gamma)``: the history likelihood ratio P(H|B)/P(H|G) and
    the history-only posterior P(G|H) under a uniform prior."""
    l = ((1.0 - p) / p) ** h
    return l, 1.0 / (1.0 + l)
