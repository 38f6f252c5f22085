"""Exact halting-time analysis of the pumping walk.

The net outcome sum performs a biased random walk; pumping halts once
its magnitude reaches ``delta_h``.  Everything is computed on the
folded chain over depths ``d = |delta|`` in {0, .., delta_h}: depth 0
advances with certainty (the first signed step merely picks a
direction), interior depths advance with the agreement probability
``P_d``, and the retreat goes to ``d - 1`` (NPS) or back to 0 (PS).
Equivalence of the folded chain with the signed walk is covered by the
test suite rather than assumed.

Two independent routes to the mean halting time are cross-checked on
every call: the truncated mass summation with its exact residual
correction, and the linear first-step equations
``E_d = 1 + sum_d' p(d -> d') E_d'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import Protocol, WalkSpec, step_up_probability
from .errors import ConvergenceError
from . import kernels

__all__ = [
    "HaltingDistribution",
    "advance_probabilities",
    "halting_distribution",
    "success_probability_by",
    "expected_rounds",
    "protocol_yield",
    "count_first_passage_paths",
]

DEFAULT_TAIL = 1e-12
DEFAULT_ROUND_CAP = 10**6


def advance_probabilities(spec: WalkSpec) -> np.ndarray:
    """Folded advance probability per transient depth 0 .. delta_h - 1."""
    assert spec.delta_h is not None
    p = np.empty(spec.delta_h, dtype=np.float64)
    p[0] = 1.0
    for d in range(1, spec.delta_h):
        p[d] = step_up_probability(spec.channel, d)
    return p


@dataclass(frozen=True)
class HaltingDistribution:
    """Truncated distribution of the halting round for one spec.

    ``rounds`` lists every round with nonzero mass up to the truncation
    point ``t_last``; ``cumulative`` is the running total of
    ``probabilities``.  ``tail_bound`` is the probability mass beyond
    ``t_last`` (still unabsorbed), so ``cumulative[-1] + tail_bound``
    is 1 up to floating-point drift.  ``mean_rounds`` comes from the
    exact first-step solve.
    """

    spec: WalkSpec
    rounds: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)
    cumulative: np.ndarray = field(repr=False)
    mean_rounds: float
    tail_bound: float
    t_last: int

    def mass_at(self, t: int) -> float:
        i = np.searchsorted(self.rounds, t)
        if i < self.rounds.size and self.rounds[i] == t:
            return float(self.probabilities[i])
        return 0.0

    def cumulative_by(self, t: int) -> float:
        i = np.searchsorted(self.rounds, t, side="right") - 1
        if i < 0:
            return 0.0
        return float(self.cumulative[i])


def _expected_rounds_solve(p_adv: np.ndarray, resets: bool) -> np.ndarray:
    """Expected remaining rounds from each transient depth, solved exactly."""
    n = p_adv.size
    a = np.eye(n)
    for d in range(n):
        if d + 1 < n:
            a[d, d + 1] -= p_adv[d]
        retreat = 1.0 - p_adv[d]
        if retreat != 0.0:
            a[d, 0 if resets else d - 1] -= retreat
    try:
        return np.linalg.solve(a, np.ones(n))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"first-step equations are singular: {exc}") from exc


def halting_distribution(
    spec: WalkSpec,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> HaltingDistribution:
    """Build the halting-round table by forward absorption recursion."""
    if not (0.0 < tail_threshold < 1.0):
        raise ValueError(f"tail threshold must lie in (0, 1), got {tail_threshold}")
    p_adv = advance_probabilities(spec)
    resets = spec.protocol is Protocol.PS
    mass, residual = kernels.halting_mass(p_adv, resets, tail_threshold, t_cap, backend)
    t_last = mass.size - 1
    tail_bound = float(residual.sum())

    remaining = _expected_rounds_solve(p_adv, resets)
    mean_solve = float(remaining[0])
    mean_sum = float(np.arange(mass.size) @ mass) + float(residual @ (t_last + remaining))
    if abs(mean_sum - mean_solve) > 1e-9 * max(1.0, abs(mean_solve)):
        raise ConvergenceError(
            f"mean halting round disagrees between summation ({mean_sum!r}) "
            f"and first-step solve ({mean_solve!r})"
        )

    support = np.flatnonzero(mass)
    probabilities = mass[support]
    return HaltingDistribution(
        spec=spec,
        rounds=support.astype(np.int64),
        probabilities=probabilities,
        cumulative=np.cumsum(probabilities),
        mean_rounds=mean_solve,
        tail_bound=tail_bound,
        t_last=t_last,
    )


def success_probability_by(
    spec: WalkSpec,
    t: int,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> float:
    """Probability the walk has halted by round ``t`` inclusive."""
    if t < 0:
        raise ValueError(f"round count must be >= 0, got {t}")
    dist = halting_distribution(spec, tail_threshold, t_cap, backend)
    return dist.cumulative_by(t)


def expected_rounds(
    spec: WalkSpec,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> float:
    """Mean number of rounds (consumed pairs) until the walk halts."""
    return halting_distribution(spec, tail_threshold, t_cap, backend).mean_rounds


def protocol_yield(
    spec: WalkSpec,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> float:
    """Distilled pairs per consumed pair, ``1 / mean_rounds``."""
    return 1.0 / expected_rounds(spec, tail_threshold, t_cap, backend)


def count_first_passage_paths(d: int, t: int) -> int:
    """Number of signed outcome paths first reaching ``|delta| = d`` at round ``t``.

    Counted over both signs (mirror paths come in pairs), matching the
    signed-path probability with its ``P_0 = 1/2`` first-step factor;
    see ``channel.path_probability`` for the bookkeeping rule.  Python
    integers keep the count exact at any size.
    """
    if d < 1:
        raise ValueError(f"halting magnitude must be >= 1, got {d}")
    if t < 1:
        raise ValueError(f"round count must be >= 1, got {t}")
    if t < d or (t - d) % 2 != 0:
        return 0
    size = 2 * d - 1  # open interval of signed positions, index x + d - 1
    counts = [0] * size
    counts[d - 1] = 1
    for _ in range(t - 1):
        nxt = [0] * size
        for i, c in enumerate(counts):
            if c == 0:
                continue
            if i - 1 >= 0:
                nxt[i - 1] += c
            if i + 1 < size:
                nxt[i + 1] += c
        counts = nxt
    return counts[size - 1] + counts[0] if size > 1 else 2 * counts[0]
