"""pumpwalk: exact and Monte Carlo analysis of single-ancilla entanglement pumping.

A noisy shared pair is purified by repeated two-outcome parity checks.
The running outcome sum performs a biased random walk whose halting
statistics fix the protocol's yield and output fidelity.  This package
provides the closed-form channel model, exact halting-time analysis,
seeded Monte Carlo sampling, waiting-error fidelity optimization, a
Werner-state preprocessing stage, and a dense density-matrix oracle
that validates the whole model against direct circuit simulation.
"""

from .channel import (
    DephasingChannel,
    Protocol,
    WalkSpec,
    alpha_of,
    fidelity_of_delta,
    kink_probability,
    min_delta_for_target,
    path_probability,
    sequence_probability,
    signed_step_probability,
    step_up_probability,
)
from .errors import ConvergenceError, OracleCheckError
from .fidelity import (
    CurvePoint,
    FidelityReport,
    LocalErrorModel,
    expected_fidelity,
    infidelity_curve,
    optimal_delta_h,
)
from .kernels import active_backend
from .montecarlo import (
    EmpiricalCurve,
    TrajectoryRecord,
    estimate_success_curve,
    simulate_trajectory,
    trial_seed,
)
from .oracle import (
    BranchOutcome,
    bell_diagonal_state,
    bell_weights,
    bilateral_distill_step,
    even_parity_weight,
    make_graph_state,
    noisy_bell_pair,
    pumping_round,
    trace_distance,
    verify_parity_map,
)
from .walk import (
    HaltingDistribution,
    count_first_passage_paths,
    expected_rounds,
    halting_distribution,
    protocol_yield,
    success_probability_by,
)
from .werner import (
    BellDiagonalState,
    PipelineReport,
    WernerSource,
    bell_state_density,
    coefficients_after,
    full_pipeline,
    recursion_step,
    residual_xy,
    residual_z,
    rounds_for_target,
    werner_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DephasingChannel",
    "Protocol",
    "WalkSpec",
    "alpha_of",
    "fidelity_of_delta",
    "step_up_probability",
    "kink_probability",
    "min_delta_for_target",
    "path_probability",
    "signed_step_probability",
    "sequence_probability",
    "ConvergenceError",
    "OracleCheckError",
    "HaltingDistribution",
    "halting_distribution",
    "success_probability_by",
    "expected_rounds",
    "protocol_yield",
    "count_first_passage_paths",
    "TrajectoryRecord",
    "EmpiricalCurve",
    "trial_seed",
    "simulate_trajectory",
    "estimate_success_curve",
    "LocalErrorModel",
    "FidelityReport",
    "CurvePoint",
    "expected_fidelity",
    "optimal_delta_h",
    "infidelity_curve",
    "WernerSource",
    "BellDiagonalState",
    "PipelineReport",
    "werner_coefficients",
    "recursion_step",
    "coefficients_after",
    "residual_xy",
    "residual_z",
    "rounds_for_target",
    "full_pipeline",
    "bell_state_density",
    "BranchOutcome",
    "make_graph_state",
    "noisy_bell_pair",
    "pumping_round",
    "verify_parity_map",
    "bilateral_distill_step",
    "bell_diagonal_state",
    "bell_weights",
    "even_parity_weight",
    "trace_distance",
    "active_backend",
]
