"""Dephasing channel model and per-round closed forms.

A shared pair affected by single-qubit dephasing of strength ``epsilon``
is pumped by repeated two-outcome parity checks.  Each check returns
+1/-1; the running sum ``delta`` of outcomes is a sufficient statistic
for the pair's parity, and the posterior fidelity, the per-round
agreement probability and the probability of any specific outcome path
are all closed forms in ``epsilon`` and ``delta``.  Everything here is
exact scalar arithmetic; the walk engine builds distributions on top.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
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
]


def alpha_of(epsilon: float) -> float:
    """Evidence weight per outcome, ``sqrt(1/epsilon - 1)``.

    One agreeing outcome multiplies the even:odd posterior odds by
    ``alpha**2 = (1 - epsilon)/epsilon``.
    """
    _check_epsilon(epsilon)
    return math.sqrt(1.0 / epsilon - 1.0)


def _check_epsilon(epsilon: float) -> None:
    # Open interval: epsilon = 0 makes the walk deterministic (alpha
    # diverges) and epsilon >= 1/2 means outcomes carry no usable
    # evidence (alpha <= 1).  Both are rejected rather than clamped.
    if not (0.0 < epsilon < 0.5):
        raise ValueError(f"epsilon must lie in (0, 0.5), got {epsilon}")


@dataclass(frozen=True)
class DephasingChannel:
    """Dephasing strength ``epsilon`` with the derived bias ``alpha``."""

    epsilon: float

    def __post_init__(self) -> None:
        _check_epsilon(self.epsilon)

    @property
    def alpha(self) -> float:
        return math.sqrt(1.0 / self.epsilon - 1.0)

    @property
    def log_alpha(self) -> float:
        # 0.5 * log((1-eps)/eps), kept in log form so that powers
        # alpha**(-2d) stay finite for any d (exp of a negative number).
        return 0.5 * (math.log1p(-self.epsilon) - math.log(self.epsilon))

    def weight_ratio(self, delta: int) -> float:
        """``alpha**(-2*|delta|)`` evaluated as exp-of-log; never overflows."""
        return math.exp(-2.0 * abs(delta) * self.log_alpha)


class Protocol(enum.Enum):
    """Pumping bookkeeping strategy.

    NPS keeps every outcome and halts once the net outcome sum reaches
    the halting magnitude.  PS restarts from scratch whenever an outcome
    disagrees with the first outcome of the current run, so it halts
    only on an unbroken run of agreements.
    """

    NPS = "nps"
    PS = "ps"


def fidelity_of_delta(channel: DephasingChannel, delta: int) -> float:
    """Posterior fidelity of the pumped pair given net outcome sum ``delta``.

    Two-hypothesis posterior: even and odd parity start at odds 1:1 and
    each net agreeing outcome multiplies the odds by ``alpha**2``, so
    ``F(delta) = 1 / (1 + alpha**(-2|delta|))``.
    """
    return 1.0 / (1.0 + channel.weight_ratio(delta))


def step_up_probability(channel: DephasingChannel, d: int) -> float:
    """Probability the next outcome agrees with the current majority at depth ``d``.

    Mixture of the two parity hypotheses weighted by the posterior:
    ``P_d = F(d)(1 - eps) + (1 - F(d)) eps``.  ``P_0 = 1/2`` is the
    signed-direction probability of the first step; see
    ``path_probability`` for how that factor is booked.
    """
    if d < 0:
        raise ValueError(f"evidence depth must be >= 0, got {d}")
    r = channel.weight_ratio(d)
    eps = channel.epsilon
    return ((1.0 - eps) + eps * r) / (1.0 + r)


def kink_probability(channel: DephasingChannel) -> float:
    """Probability of an advance immediately followed by a retreat.

    ``P_d (1 - P_{d+1})`` is independent of the depth ``d`` and equals
    ``eps (1 - eps)``; every two-round excursion in an outcome path
    contributes this same factor.
    """
    return channel.epsilon * (1.0 - channel.epsilon)


def min_delta_for_target(channel: DephasingChannel, f_target: float) -> int:
    """Smallest halting magnitude whose posterior fidelity reaches ``f_target``.

    Ties count: a halting magnitude whose fidelity equals the target
    exactly is accepted.  The comparison runs in log-odds with a
    relative slack of 1e-12 so that exact ties survive the rounding of
    exp-of-log evaluation.
    """
    if not (0.5 < f_target < 1.0):
        raise ValueError(f"target fidelity must lie in (0.5, 1), got {f_target}")
    # F(d) >= f  <=>  2 d log(alpha) >= log(f/(1-f))
    need = math.log(f_target) - math.log1p(-f_target)
    step = 2.0 * channel.log_alpha
    slack = 1e-12 * max(1.0, need)
    d = max(1, math.ceil((need - slack) / step))
    while d > 1 and (d - 1) * step >= need - slack:
        d -= 1
    while d * step < need - slack:
        d += 1
    return d


def path_probability(channel: DephasingChannel, d: int, t: int) -> float:
    """Probability of one signed outcome path first reaching ``|delta| = d`` at round ``t``.

    Every first-passage path of length ``t`` has the same probability:
    the direct climb contributes ``prod_{j=0}^{d-1} P_j`` and each of
    the ``(t - d)/2`` excursions contributes one kink factor
    ``eps(1 - eps)``.  Zero is returned when no such path exists
    (``t < d`` or mismatched parity).

    Bookkeeping: the ``j = 0`` factor is ``P_0 = 1/2``, the probability
    of one *signed* first step.  The folded walk on ``|delta|`` leaves
    depth 0 with certainty, and the missing 1/2 reappears because signed
    path counts come in mirror-image pairs.  Use signed probabilities
    with signed counts, or folded transitions with folded states; mixing
    the two views double-counts the first step.
    """
    if d < 1:
        raise ValueError(f"halting magnitude must be >= 1, got {d}")
    if t < 0:
        raise ValueError(f"round count must be >= 0, got {t}")
    if t < d or (t - d) % 2 != 0:
        return 0.0
    climb = 1.0
    for j in range(d):
        climb *= step_up_probability(channel, j)
    return climb * kink_probability(channel) ** ((t - d) // 2)


def signed_step_probability(channel: DephasingChannel, position: int, outcome: int) -> float:
    """Probability that the next outcome is ``outcome`` given signed sum ``position``."""
    if outcome not in (-1, 1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome}")
    if position == 0:
        return 0.5
    p = step_up_probability(channel, abs(position))
    agrees = (position > 0) == (outcome > 0)
    return p if agrees else 1.0 - p


def sequence_probability(channel: DephasingChannel, outcomes: list[int] | tuple[int, ...]) -> float:
    """Probability of an explicit outcome sequence under the signed walk."""
    position = 0
    prob = 1.0
    for m in outcomes:
        prob *= signed_step_probability(channel, position, m)
        position += m
    return prob


@dataclass(frozen=True)
class WalkSpec:
    """A channel plus halting rule; the unit of work for the walk engine.

    ``delta_h`` may be omitted when ``target_fidelity`` is given, in
    which case the smallest sufficient halting magnitude is derived.
    When both are given they must be consistent.
    """

    channel: DephasingChannel
    delta_h: int | None = None
    protocol: Protocol = Protocol.NPS
    target_fidelity: float | None = None

    def __post_init__(self) -> None:
        if self.delta_h is None:
            if self.target_fidelity is None:
                raise ValueError("either delta_h or target_fidelity is required")
            object.__setattr__(
                self, "delta_h", min_delta_for_target(self.channel, self.target_fidelity)
            )
        if not isinstance(self.delta_h, int) or isinstance(self.delta_h, bool):
            raise ValueError(f"delta_h must be an integer, got {self.delta_h!r}")
        if self.delta_h < 1:
            raise ValueError(f"delta_h must be >= 1, got {self.delta_h}")
        if self.target_fidelity is not None:
            derived = min_delta_for_target(self.channel, self.target_fidelity)
            if derived != self.delta_h:
                raise ValueError(
                    f"delta_h={self.delta_h} inconsistent with target fidelity "
                    f"{self.target_fidelity} (needs {derived})"
                )

    @property
    def halting_fidelity(self) -> float:
        assert self.delta_h is not None
        return fidelity_of_delta(self.channel, self.delta_h)
