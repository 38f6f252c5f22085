"""Expected output fidelity under per-round local error accumulation.

Waiting costs: while the walk runs for ``T`` rounds, local errors
degrade the pumped pair at probability ``eta`` per round, bounded
linearly as a fidelity factor ``max(0, 1 - eta*T)``.  The expected
output fidelity couples the halting-round distribution to that factor,

    E(F) = F(delta_h) * sum_T mass(T) * max(0, 1 - eta*T),

and raising ``delta_h`` trades a better halting fidelity against a
longer, more error-exposed walk.  ``optimal_delta_h`` sweeps that
trade-off exhaustively.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import DephasingChannel, Protocol, WalkSpec, fidelity_of_delta
from .walk import DEFAULT_ROUND_CAP, DEFAULT_TAIL, halting_distribution

__all__ = [
    "LocalErrorModel",
    "FidelityReport",
    "CurvePoint",
    "DEFAULT_DELTA_MAX",
    "expected_fidelity",
    "optimal_delta_h",
    "infidelity_curve",
]

DEFAULT_DELTA_MAX = 64


@dataclass(frozen=True)
class LocalErrorModel:
    """Per-round local error probability ``eta`` on the waiting pair."""

    eta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.eta < 1.0):
            raise ValueError(f"eta must lie in [0, 1), got {self.eta}")


@dataclass(frozen=True)
class FidelityReport:
    """Expected output fidelity of one spec under one error model."""

    spec: WalkSpec
    eta: float
    expected_fidelity: float
    expected_infidelity: float
    halting_fidelity: float
    mean_rounds: float
    clamped: bool


def _eta_of(model: LocalErrorModel | float) -> float:
    if isinstance(model, LocalErrorModel):
        return model.eta
    return LocalErrorModel(float(model)).eta


def expected_fidelity(
    spec: WalkSpec,
    model: LocalErrorModel | float,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> FidelityReport:
    """Couple the halting distribution to the linear waiting-error bound.

    Summation runs over the truncated distribution; terms where the
    linear bound goes negative are clamped to zero and flagged.  With no
    clamping the sum collapses to ``F(delta_h) * (1 - eta * <T>)`` up to
    the tail mass, which the analysis tests exploit.
    """
    eta = _eta_of(model)
    dist = halting_distribution(spec, tail_threshold, t_cap, backend)
    factors = 1.0 - eta * dist.rounds
    clamped = bool(np.any(factors < 0.0))
    if clamped:
        factors = np.maximum(factors, 0.0)
    halting_f = fidelity_of_delta(spec.channel, spec.delta_h)
    value = halting_f * float(dist.probabilities @ factors)
    return FidelityReport(
        spec=spec,
        eta=eta,
        expected_fidelity=value,
        expected_infidelity=1.0 - value,
        halting_fidelity=halting_f,
        mean_rounds=dist.mean_rounds,
        clamped=clamped,
    )


def optimal_delta_h(
    channel: DephasingChannel,
    model: LocalErrorModel | float,
    delta_max: int = DEFAULT_DELTA_MAX,
    protocol: Protocol = Protocol.NPS,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> FidelityReport:
    """Exhaustive sweep of ``delta_h`` in 1 .. delta_max for the best E(F).

    Ties resolve to the smaller threshold.  A maximum sitting exactly at
    ``delta_max`` triggers a warning since the window likely truncated
    the search.
    """
    if delta_max < 1:
        raise ValueError(f"delta_max must be >= 1, got {delta_max}")
    best: FidelityReport | None = None
    for delta_h in range(1, delta_max + 1):
        spec = WalkSpec(channel=channel, delta_h=delta_h, protocol=protocol)
        report = expected_fidelity(spec, model, tail_threshold, t_cap, backend)
        if best is None or report.expected_fidelity > best.expected_fidelity:
            best = report
    assert best is not None
    if best.spec.delta_h == delta_max:
        warnings.warn(
            f"optimal delta_h sits at the search limit delta_max={delta_max}; "
            "enlarge the window",
            RuntimeWarning,
            stacklevel=2,
        )
    return best


@dataclass(frozen=True)
class CurvePoint:
    epsilon: float
    delta_h: int
    expected_infidelity: float


def infidelity_curve(
    epsilons: "np.ndarray | list[float]",
    model: LocalErrorModel | float,
    delta_max: int = DEFAULT_DELTA_MAX,
    protocol: Protocol = Protocol.NPS,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> tuple[list[CurvePoint], list[tuple[float, str]]]:
    """Optimized infidelity across a channel grid.

    Failures at single grid points (domain errors, non-convergence) are
    collected and returned alongside the rows instead of aborting the
    sweep.
    """
    rows: list[CurvePoint] = []
    errors: list[tuple[float, str]] = []
    for eps in epsilons:
        try:
            channel = DephasingChannel(float(eps))
            best = optimal_delta_h(
                channel, model, delta_max, protocol, tail_threshold, t_cap, backend
            )
        except Exception as exc:  # noqa: BLE001 - per-point survival is the contract
            errors.append((float(eps), str(exc)))
            continue
        rows.append(
            CurvePoint(
                epsilon=float(eps),
                delta_h=int(best.spec.delta_h),
                expected_infidelity=best.expected_infidelity,
            )
        )
    return rows, errors
