"""Monte Carlo oracle for the cascade probabilities.

Every agent consumes exactly two uniforms, ``u_fake`` then ``u_signal``, even
when one of them is not needed.  This keeps the agent-level simulation (full
Bayesian decisions) and the walk-level simulation (the ``h`` random walk) on
the same observation sequence when they share a stream, which is what the
coupling tests rely on.

Bulk estimation runs trials in fixed-size blocks.  Block ``b`` draws from a
generator seeded by ``SeedSequence(seed, spawn_key=(b,))``, so trial ``i``
always sees the same uniforms for a given seed no matter how many trials are
requested or how many worker processes run.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Protocol

import numpy as np

from .model_core import (
    DomainError,
    ModelParams,
    Observation,
    Signal,
    Status,
    Value,
    WalkState,
    derive_params,
    walk_update,
)

DEFAULT_HORIZON = 10_000
BLOCK_SIZE = 8192
_TIE_ULPS = 16 * sys.float_info.epsilon

_OUTCOME_CODES = {0: Status.UNDECIDED, 1: Status.Y_CASCADE, 2: Status.N_CASCADE}


class UniformStream(Protocol):
    def random(self) -> float: ...


class ReplayStream:
    """Feeds a fixed sequence of uniforms; handy for replaying a block column."""

    def __init__(self, values: Iterable[float]):
        self._it = iter(values)

    def random(self) -> float:
        try:
            return float(next(self._it))
        except StopIteration:
            raise RuntimeError("replay stream exhausted") from None


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Independent generator for one trial, keyed on ``(seed, trial_index)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial_index,))))


@dataclass(frozen=True)
class TrialRecord:
    outcome: Status
    absorption_step: Optional[int]
    final_h: float


def _signal(u_signal: float, p: float, v: Value) -> Signal:
    matches = u_signal < p
    good = v is Value.GOOD
    return Signal.H if matches == good else Signal.L


def simulate_trial_agent_level(params: ModelParams, rng: UniformStream, horizon: int = DEFAULT_HORIZON) -> TrialRecord:
    """One run of the full agent model.

    Each ordinary agent picks the action favoured by its posterior log-odds
    for ``G`` given its own signal and the public history, following the
    signal on a tie.  The history enters through the counts of informative
    ``Y``'s and ``N``'s.  A cascade is declared once the next agent's action
    no longer depends on its signal.
    """
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    d = derive_params(params)
    log_alpha = math.log(d.alpha)
    # log P(O|G)/P(O|B) for an observation made before any cascade;
    # (1-a)/b simplifies to (1-p)/p exactly
    w_y = math.log(d.a / (1.0 - d.b))
    w_n = -log_alpha
    n_y = n_n = 0
    state = WalkState()

    def choice(signal: Signal) -> Observation:
        log_odds = n_y * w_y + n_n * w_n + (log_alpha if signal is Signal.H else -log_alpha)
        # exact ties (e.g. eps = 0, where w_y = -w_n) come out as rounding noise
        noise = _TIE_ULPS * (n_y * w_y - n_n * w_n + log_alpha)
        if log_odds > noise:
            return Observation.Y
        if log_odds < -noise:
            return Observation.N
        return Observation.Y if signal is Signal.H else Observation.N

    for i in range(1, horizon + 1):
        u_fake = rng.random()
        u_signal = rng.random()
        action = choice(_signal(u_signal, d.p, d.true_value))
        obs = Observation.Y if u_fake < d.eps else action
        if obs is Observation.Y:
            n_y += 1
        else:
            n_n += 1
        state = walk_update(state, obs, d)
        next_h, next_l = choice(Signal.H), choice(Signal.L)
        if next_h is next_l:
            outcome = Status.Y_CASCADE if next_h is Observation.Y else Status.N_CASCADE
            return TrialRecord(outcome, i, state.h)
    return TrialRecord(Status.UNDECIDED, None, state.h)


def simulate_trial_walk_level(params: ModelParams, rng: UniformStream, horizon: int = DEFAULT_HORIZON) -> TrialRecord:
    """One run of the reduced walk: signal-following agents plus fake ``Y``'s."""
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    d = derive_params(params)
    state = WalkState()
    for _ in range(horizon):
        u_fake = rng.random()
        u_signal = rng.random()
        high = _signal(u_signal, d.p, d.true_value) is Signal.H
        obs = Observation.Y if (u_fake < d.eps or high) else Observation.N
        state = walk_update(state, obs, d)
        if state.absorbed:
            return TrialRecord(state.status, state.steps, state.h)
    return TrialRecord(Status.UNDECIDED, None, state.h)


def simulate_block(
    params: ModelParams,
    rng: np.random.Generator,
    size: int,
    horizon: int = DEFAULT_HORIZON,
    n_live: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised walk-level trials.

    Every step draws a ``(size, 2)`` array of ``(u_fake, u_signal)`` rows, one
    row per trial, whether or not the trial is still running.  Only the first
    ``n_live`` trials keep the loop alive.

    Returns ``(outcome_codes, absorption_steps, final_h)`` with codes
    0 = undecided, 1 = Y cascade, 2 = N cascade and step -1 when undecided.
    """
    d = derive_params(params)
    n_live = size if n_live is None else n_live
    good = d.true_value is Value.GOOD
    h = np.zeros(size)
    code = np.zeros(size, dtype=np.int8)
    step = np.full(size, -1, dtype=np.int64)
    active = np.ones(size, dtype=bool)
    live = np.zeros(size, dtype=bool)
    live[:n_live] = True
    t = 0
    while t < horizon and (active & live).any():
        u = rng.random((size, 2))
        t += 1
        matches = u[:, 1] < d.p
        high = matches if good else ~matches
        y = (u[:, 0] < d.eps) | high
        h = np.where(active, np.where(y, h + d.eta, h - 1.0), h)
        up = active & (h > 1.0)
        down = active & (h < -1.0)
        code[up] = 1
        code[down] = 2
        step[up | down] = t
        active &= ~(up | down)
    return code, step, h


def _block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _run_block(args) -> tuple[int, int, int, int]:
    params, seed, block, n_live, horizon = args
    code, step, _ = simulate_block(params, _block_generator(seed, block), BLOCK_SIZE, horizon, n_live)
    code, step = code[:n_live], step[:n_live]
    y = int(np.count_nonzero(code == 1))
    n = int(np.count_nonzero(code == 2))
    return y, n, n_live - y - n, int(step[step > 0].sum())


@dataclass(frozen=True)
class SimulationResult:
    trials: int
    y_count: int
    n_count: int
    undecided_count: int
    p_ycas_hat: float
    ci_halfwidth: float
    seed: int
    horizon: int
    mean_absorption_step: float = float("nan")

    @classmethod
    def from_counts(cls, trials, y, n, undecided, seed, horizon, step_sum=0) -> "SimulationResult":
        p_hat = y / trials
        absorbed = y + n
        return cls(
            trials=trials,
            y_count=y,
            n_count=n,
            undecided_count=undecided,
            p_ycas_hat=p_hat,
            ci_halfwidth=1.96 * math.sqrt(p_hat * (1.0 - p_hat) / trials),
            seed=seed,
            horizon=horizon,
            mean_absorption_step=step_sum / absorbed if absorbed else float("nan"),
        )

    @property
    def stderr(self) -> float:
        return self.ci_halfwidth / 1.96

    @property
    def undecided_fraction(self) -> float:
        return self.undecided_count / self.trials


def block_tasks(params: ModelParams, trials: int, seed: int, horizon: int) -> list[tuple]:
    tasks = []
    for block, start in enumerate(range(0, trials, BLOCK_SIZE)):
        tasks.append((params, seed, block, min(BLOCK_SIZE, trials - start), horizon))
    return tasks


def aggregate(trials: int, seed: int, horizon: int, counts: Iterable[tuple[int, int, int, int]]) -> SimulationResult:
    y = n = u = s = 0
    for cy, cn, cu, cs in counts:
        y, n, u, s = y + cy, n + cn, u + cu, s + cs
    return SimulationResult.from_counts(trials, y, n, u, seed, horizon, s)


def estimate_p_ycas(
    params: ModelParams,
    trials: int,
    seed: int = 0,
    horizon: int = DEFAULT_HORIZON,
    workers: int = 1,
) -> SimulationResult:
    """Estimate the Y-cascade probability from ``trials`` walk-level runs.

    The result depends only on ``(params, trials, seed, horizon)``; ``workers``
    changes wall time, not output.  Trials still undecided at the horizon are
    counted separately and never folded into either cascade.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    tasks = block_tasks(params, trials, seed, horizon)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_run_block, tasks))
    else:
        counts = [_run_block(t) for t in tasks]
    return aggregate(trials, seed, horizon, counts)
