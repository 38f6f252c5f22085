"""Post-selected preprocessing of raw Werner pairs.

Raw pairs have noise of every Pauli type, while the pumping walk
assumes dephasing only.  Repeated post-selected rounds (one fresh raw
pair consumed per round, target kept only on even joint parity) drive
the X and Y components down double-exponentially while the Z component
saturates, after which the walk handles the Z noise.

Coefficients (a, b, c, d) weigh the Bell components (Phi, X Phi,
Z Phi, Y Phi).  Index convention: ``n = 1`` labels the raw pair itself,
so ``n`` rounds of preparation mean ``n - 1`` post-selected steps, and
the unnormalized coefficient sum at ``n`` is the probability that all
those steps succeeded.  Closed forms:

    a_n + c_n = ((1 + 2 F0)/3)**n
    b_n = d_n = ((2/3)(1 - F0))**n / 2
    c_n       = [((1 + 2 F0)/3)**n - ((4 F0 - 1)/3)**n] / 2
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import DephasingChannel, Protocol
from .errors import ConvergenceError
from .fidelity import DEFAULT_DELTA_MAX, FidelityReport, LocalErrorModel, optimal_delta_h
from .oracle import bell_diagonal_state, bilateral_distill_step
from .walk import DEFAULT_ROUND_CAP, DEFAULT_TAIL

__all__ = [
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
]


@dataclass(frozen=True)
class WernerSource:
    """Raw pair fidelity ``f0`` with the target Bell state."""

    f0: float

    def __post_init__(self) -> None:
        if not (0.5 < self.f0 <= 1.0):
            raise ValueError(f"f0 must lie in (0.5, 1], got {self.f0}")


@dataclass(frozen=True)
class BellDiagonalState:
    """Bell-component weights; ``normalized`` says whether they sum to 1."""

    a: float
    b: float
    c: float
    d: float
    normalized: bool = False

    def __post_init__(self) -> None:
        for name, w in zip("abcd", (self.a, self.b, self.c, self.d)):
            if w < 0.0:
                raise ValueError(f"weight {name} must be >= 0, got {w}")
        if self.normalized and abs(self.total - 1.0) > 1e-12:
            raise ValueError(f"weights marked normalized but sum to {self.total!r}")

    @property
    def total(self) -> float:
        return self.a + self.b + self.c + self.d

    def rescaled(self) -> "BellDiagonalState":
        t = self.total
        return BellDiagonalState(self.a / t, self.b / t, self.c / t, self.d / t, normalized=True)


def _f0_of(source: "WernerSource | float") -> float:
    if isinstance(source, WernerSource):
        return source.f0
    return WernerSource(float(source)).f0


def werner_coefficients(source: "WernerSource | float") -> BellDiagonalState:
    """Bell weights of the raw Werner pair: ``(f0, r, r, r)`` with ``r = (1-f0)/3``."""
    f0 = _f0_of(source)
    r = (1.0 - f0) / 3.0
    return BellDiagonalState(f0, r, r, r, normalized=True)


def recursion_step(state: BellDiagonalState, source: "WernerSource | float") -> BellDiagonalState:
    """One post-selected round against a fresh raw pair (unnormalized output).

    The control pair's dominant component passes the target's parity
    weights through; its Z-type components flip the observed parity and
    its X/Y-type components deposit a phase flip on the target:

        a' = f0 a + r c,  c' = r a + f0 c,  b' = d' = r (b + d),

    with ``r = (1 - f0)/3``.  The output total over the input total is
    the round's success probability.
    """
    f0 = _f0_of(source)
    r = (1.0 - f0) / 3.0
    return BellDiagonalState(
        a=f0 * state.a + r * state.c,
        b=r * (state.b + state.d),
        c=r * state.a + f0 * state.c,
        d=r * (state.b + state.d),
        normalized=False,
    )


def _check_rounds(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"round index must be an integer >= 1, got {n!r}")


def coefficients_after(source: "WernerSource | float", n: int) -> BellDiagonalState:
    """Unnormalized coefficients at round index ``n`` from the closed forms."""
    f0 = _f0_of(source)
    _check_rounds(n)
    even = ((1.0 + 2.0 * f0) / 3.0) ** n
    dropped = ((4.0 * f0 - 1.0) / 3.0) ** n
    bd = ((2.0 / 3.0) * (1.0 - f0)) ** n / 2.0
    c = (even - dropped) / 2.0
    return BellDiagonalState(a=even - c, b=bd, c=c, d=bd, normalized=False)


def residual_xy(source: "WernerSource | float", n: int) -> float:
    """Normalized X+Y weight after ``n`` rounds, ``1/(1 + ((1+2f0)/(2-2f0))**n)``."""
    f0 = _f0_of(source)
    _check_rounds(n)
    if f0 == 1.0:
        return 0.0
    return 1.0 / (1.0 + ((1.0 + 2.0 * f0) / (2.0 - 2.0 * f0)) ** n)


def residual_z(source: "WernerSource | float", n: int) -> float:
    """Normalized Z weight after ``n`` rounds; saturates toward 1/2 from below."""
    state = coefficients_after(source, n)
    return state.c / state.total


def rounds_for_target(source: "WernerSource | float", target_xy: float) -> int:
    """Smallest round index whose X+Y residual is at or below ``target_xy``.

    The raw pair (``n = 1``) counts: if it already meets the target the
    answer is 1.
    """
    f0 = _f0_of(source)
    if not (0.0 < target_xy < 1.0):
        raise ValueError(f"target_xy must lie in (0, 1), got {target_xy}")
    n = 1
    while residual_xy(f0, n) > target_xy:
        n += 1
        if n > 10_000:
            raise ConvergenceError("X+Y residual did not reach the target")
    return n


def bell_state_density(state: BellDiagonalState):
    """Bridge to the dense oracle: Bell weights to a 4x4 density operator."""
    if not state.normalized:
        state = state.rescaled()
    return bell_diagonal_state(state.a, state.b, state.c, state.d)


@dataclass(frozen=True)
class PipelineReport:
    """End-to-end summary: preprocessing, then the optimized walk.

    ``success_probabilities[k]`` is the oracle-computed probability that
    preprocessing round ``k + 1 -> k + 2`` post-selects successfully.
    ``raw_pairs_per_dephased_pair`` prices a restart-from-scratch
    strategy (a failed round discards the target); multiplied by the
    walk's mean round count it gives ``raw_pairs_per_distilled_pair``.
    """

    f0: float
    target_xy: float
    n: int
    epsilon: float
    eta: float
    noiseless: bool
    delta_h: int | None
    expected_fidelity: float
    expected_infidelity: float
    mean_rounds: float | None
    success_probabilities: tuple[float, ...]
    raw_pairs_per_dephased_pair: float
    raw_pairs_per_distilled_pair: float | None
    note: str = ""


def full_pipeline(
    source: "WernerSource | float",
    target_xy: float,
    delta_max: int = DEFAULT_DELTA_MAX,
    protocol: Protocol = Protocol.NPS,
    tail_threshold: float = DEFAULT_TAIL,
    t_cap: int = DEFAULT_ROUND_CAP,
    backend: str | None = None,
) -> PipelineReport:
    """Preprocess until X+Y noise is at target, then optimize the walk.

    The preprocessing depth sets the dephasing strength ``epsilon`` (the
    surviving Z weight) and the local error rate ``eta`` (the surviving
    X+Y weight) seen by the walk; the halting threshold is then chosen
    by exhaustive sweep.
    """
    f0 = _f0_of(source)
    n = rounds_for_target(f0, target_xy)
    eta = residual_xy(f0, n)
    epsilon = residual_z(f0, n)

    success: list[float] = []
    cost = 1.0
    for k in range(1, n):
        target = bell_state_density(coefficients_after(f0, k).rescaled())
        control = bell_state_density(werner_coefficients(f0))
        _, p = bilateral_distill_step(control, target)
        success.append(p)
        cost = (cost + 1.0) / p

    if epsilon == 0.0:
        return PipelineReport(
            f0=f0,
            target_xy=target_xy,
            n=n,
            epsilon=0.0,
            eta=eta,
            noiseless=True,
            delta_h=None,
            expected_fidelity=1.0,
            expected_infidelity=0.0,
            mean_rounds=None,
            success_probabilities=tuple(success),
            raw_pairs_per_dephased_pair=cost,
            raw_pairs_per_distilled_pair=None,
            note="noiseless, no distillation needed",
        )

    channel = DephasingChannel(epsilon)
    best: FidelityReport = optimal_delta_h(
        channel, LocalErrorModel(eta), delta_max, protocol, tail_threshold, t_cap, backend
    )
    return PipelineReport(
        f0=f0,
        target_xy=target_xy,
        n=n,
        epsilon=epsilon,
        eta=eta,
        noiseless=False,
        delta_h=best.spec.delta_h,
        expected_fidelity=best.expected_fidelity,
        expected_infidelity=best.expected_infidelity,
        mean_rounds=best.mean_rounds,
        success_probabilities=tuple(success),
        raw_pairs_per_dephased_pair=cost,
        raw_pairs_per_distilled_pair=cost * best.mean_rounds,
    )
