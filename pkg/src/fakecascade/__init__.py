"""Information cascades in sequential Bayesian learning with fake agents."""

from .analytic_engine import (
    CascadeEstimate,
    Method,
    Side,
    delta_r,
    find_eps_lower,
    p_wrong_cascade,
    p_ycas_at_threshold,
    p_ycas_limit_eps0,
    p_ycas_limit_eps1,
    p_ycas_no_fakes,
    p_ycas_truncated,
)
from .model_core import (
    DerivedParams,
    DomainError,
    ModelParams,
    Observation,
    Signal,
    Status,
    Value,
    WalkState,
    decide,
    derive_params,
    eta_weight,
    likelihood_from_h,
    walk_update,
)
from .monte_carlo import (
    SimulationResult,
    TrialRecord,
    estimate_p_ycas,
    simulate_trial_agent_level,
    simulate_trial_walk_level,
)
from .thresholds import (
    GuardBandError,
    StageSequence,
    ThresholdTable,
    epsilon_threshold,
    interval_index,
    is_near_threshold,
    stage_sequence,
    threshold_table,
)

__version__ = "0.1.0"
