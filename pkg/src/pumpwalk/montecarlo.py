"""Seeded Monte Carlo sampling of the pumping walk.

Trials are independent streams of a counter-based generator: the draw
for round ``t`` of trial ``i`` is a pure function of
``(master_seed, i, t)``.  Batches therefore aggregate identically in
any execution order, rerunning with the same master seed is
byte-identical, and ``simulate_trajectory`` replays any single batch
trial from ``trial_seed(master_seed, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import Protocol, WalkSpec, step_up_probability
from .errors import ConvergenceError
from . import kernels
from .walk import DEFAULT_ROUND_CAP, advance_probabilities

__all__ = [
    "TrajectoryRecord",
    "EmpiricalCurve",
    "trial_seed",
    "simulate_trajectory",
    "estimate_success_curve",
]

DEFAULT_TRIALS = 10**5


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Stream seed of batch trial ``trial_index`` under ``master_seed``."""
    return kernels.stream_seed(master_seed, trial_index)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One full walk: the signed outcome of every round until halting."""

    spec: WalkSpec
    seed: int
    outcomes: tuple[int, ...]
    halted_at: int


@dataclass(frozen=True)
class EmpiricalCurve:
    """Tallied halting rounds for a batch of trials.

    ``counts[k]`` trials halted exactly at ``rounds[k]``;
    ``frequency`` is the cumulative success fraction by that round and
    ``std_error`` its binomial standard error.
    """

    spec: WalkSpec
    master_seed: int
    trials: int
    rounds: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    frequency: np.ndarray = field(repr=False)
    std_error: np.ndarray = field(repr=False)

    @property
    def mean_rounds(self) -> float:
        return float(self.rounds @ self.counts) / self.trials


def simulate_trajectory(spec: WalkSpec, seed: int, t_cap: int = DEFAULT_ROUND_CAP) -> TrajectoryRecord:
    """Run one walk to halting, recording every signed outcome.

    ``seed`` is the trial's own stream seed.  The same uniform that the
    batch kernel spends on the folded advance/retreat decision is spent
    here on the signed outcome, so halting rounds agree exactly with
    the batch kernel trial by trial.
    """
    assert spec.delta_h is not None
    resets = spec.protocol is Protocol.PS
    p_adv = advance_probabilities(spec)
    outcomes: list[int] = []
    depth = 0  # run depth for PS, |delta| for NPS
    sign = 1
    t = 0
    while t < t_cap:
        t += 1
        u = kernels.uniform_at(seed, t)
        if depth == 0:
            # the advance is certain; the draw picks the direction
            sign = 1 if u < 0.5 else -1
            outcomes.append(sign)
            depth = 1
        elif u < p_adv[depth]:
            outcomes.append(sign)
            depth += 1
        else:
            outcomes.append(-sign)
            depth = 0 if resets else depth - 1
        if depth == spec.delta_h:
            return TrajectoryRecord(spec=spec, seed=seed, outcomes=tuple(outcomes), halted_at=t)
    raise ConvergenceError(f"trajectory did not halt within {t_cap} rounds")


def estimate_success_curve(
    spec: WalkSpec,
    trials: int = DEFAULT_TRIALS,
    master_seed: int = 0,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> EmpiricalCurve:
    """Tally halting rounds over ``trials`` independent walks."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    p_adv = advance_probabilities(spec)
    resets = spec.protocol is Protocol.PS
    halted = kernels.simulate_halts(master_seed, trials, p_adv, resets, t_cap, backend)
    if np.any(halted < 0):
        stuck = int(np.count_nonzero(halted < 0))
        raise ConvergenceError(f"{stuck} of {trials} trials exceeded the {t_cap} round cap")
    tally = np.bincount(halted)
    rounds = np.flatnonzero(tally).astype(np.int64)
    counts = tally[rounds]
    frequency = np.cumsum(counts) / trials
    std_error = np.sqrt(frequency * (1.0 - frequency) / trials)
    return EmpiricalCurve(
        spec=spec,
        master_seed=master_seed,
        trials=trials,
        rounds=rounds,
        counts=counts,
        frequency=frequency,
        std_error=std_error,
    )
