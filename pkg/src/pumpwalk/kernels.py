"""Hot numeric kernels with a selectable backend.

Two kernels dominate runtime: the forward absorption recursion that
builds halting-time tables, and the Monte Carlo trial loop.  Each has a
numba-compiled implementation and a pure-numpy implementation with the
same contract.  ``PUMPWALK_BACKEND=numpy`` or ``=numba`` selects the
path; unset, numba is used when importable.

Monte Carlo draws come from a counter-based stream: trial ``i``, round
``t`` maps through a splitmix64 finalizer to one uniform, so both
backends produce bit-identical trajectories regardless of execution
order, and any single trial can be replayed in isolation from
``(master_seed, i)`` alone.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConvergenceError

__all__ = [
    "HAS_NUMBA",
    "active_backend",
    "halting_mass",
    "simulate_halts",
    "stream_seed",
    "uniform_at",
]

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

_ENV_VAR = "PUMPWALK_BACKEND"

# splitmix64 constants; STREAM_GAMMA spaces trial streams, ROUND_GAMMA
# spaces rounds within a stream.
_MASK64 = (1 << 64) - 1
STREAM_GAMMA = 0x9E3779B97F4A7C15
ROUND_GAMMA = 0xD1B54A32D192ED03
_INV_2_53 = 2.0**-53


def active_backend(override: str | None = None) -> str:
    """Resolve the kernel backend: explicit override, else env var, else numba."""
    choice = override if override is not None else os.environ.get(_ENV_VAR, "")
    choice = choice.strip().lower()
    if choice == "":
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is not importable")
        return "numba"
    raise ValueError(f"unknown backend {choice!r} (expected 'numba' or 'numpy')")


# -- counter-based uniforms ---------------------------------------------------
#
# Reference implementation in plain python ints (masked to 64 bits).
# The numpy and numba paths below reproduce it bit for bit.


def _mix64(x: int) -> int:
    z = (x + STREAM_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_seed(master_seed: int, trial_index: int) -> int:
    """Per-trial stream seed derived from the master seed and trial index."""
    if not (0 <= master_seed <= _MASK64):
        raise ValueError("master seed must fit in 64 bits")
    if trial_index < 0:
        raise ValueError("trial index must be >= 0")
    return _mix64((master_seed + STREAM_GAMMA * (trial_index + 1)) & _MASK64)


def uniform_at(seed: int, round_index: int) -> float:
    """Uniform in [0, 1) for draw ``round_index`` (1-based) of a stream."""
    z = _mix64((seed + ROUND_GAMMA * round_index) & _MASK64)
    return (z >> 11) * _INV_2_53


def _mix64_np(x: np.ndarray) -> np.ndarray:
    z = x + np.uint64(STREAM_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


# -- halting-time recursion ---------------------------------------------------
#
# Transient states d = 0 .. delta_h - 1 on the folded walk |delta|.
# p_adv[d] is the advance probability (p_adv[0] = 1); retreat goes to
# d - 1, or to 0 when resets=True.  mass[t] receives the probability of
# first absorption at round t.


def _dp_block_np(v, mass, t0, p_adv, resets, target_cum, cum):
    n = v.size
    t = t0
    t_max = mass.size - 1
    while t < t_max:
        t += 1
        up = p_adv * v
        absorbed = up[-1]
        new = np.zeros_like(v)
        new[1:] = up[:-1]
        if n > 1:
            down = v[1:] - up[1:]
            if resets:
                new[0] += down.sum()
            else:
                new[:-1] += down
        v[:] = new
        mass[t] = absorbed
        cum += absorbed
        if cum >= target_cum:
            return t, cum, True
    return t, cum, False


def _halting_mass_loop(dp_block, p_adv, resets, tail_threshold, t_cap):
    delta_h = p_adv.size
    v = np.zeros(delta_h, dtype=np.float64)
    v[0] = 1.0
    target = 1.0 - tail_threshold
    size = min(t_cap + 1, max(256, 4 * delta_h))
    mass = np.zeros(size, dtype=np.float64)
    t, cum, done = dp_block(v, mass, 0, p_adv, resets, target, 0.0)
    while not done:
        if mass.size - 1 >= t_cap:
            raise ConvergenceError(
                f"halting distribution not converged after {t_cap} rounds "
                f"(cumulative {cum!r}, tail threshold {tail_threshold!r})"
            )
        grown = np.zeros(min(t_cap + 1, mass.size * 4), dtype=np.float64)
        grown[: mass.size] = mass
        mass = grown
        t, cum, done = dp_block(v, mass, t, p_adv, resets, target, cum)
    return mass[: t + 1], v


def halting_mass(
    p_adv: np.ndarray,
    resets: bool,
    tail_threshold: float,
    t_cap: int,
    backend: str | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Dense first-absorption mass table and the residual state vector.

    Returns ``(mass, residual)`` where ``mass[t]`` is the probability of
    halting exactly at round ``t`` (``t`` up to the first round where
    the cumulative reaches ``1 - tail_threshold``) and ``residual[d]``
    is the probability of still sitting at depth ``d`` afterwards.
    """
    p_adv = np.ascontiguousarray(p_adv, dtype=np.float64)
    if active_backend(backend) == "numba":
        from ._numba_kernels import dp_block_nb

        return _halting_mass_loop(dp_block_nb, p_adv, resets, tail_threshold, t_cap)
    return _halting_mass_loop(_dp_block_np, p_adv, resets, tail_threshold, t_cap)


# -- Monte Carlo trial loop ---------------------------------------------------


def _simulate_halts_np(master_seed, n_trials, p_adv, resets, t_cap):
    delta_h = p_adv.size
    idx = np.arange(1, n_trials + 1, dtype=np.uint64)
    seeds = _mix64_np(np.uint64(master_seed) + np.uint64(STREAM_GAMMA) * idx)
    depth = np.zeros(n_trials, dtype=np.int64)
    halted = np.full(n_trials, -1, dtype=np.int64)
    alive = np.arange(n_trials)
    t = 0
    while alive.size and t < t_cap:
        t += 1
        # round offset in python ints: numpy warns on scalar wraparound
        offset = np.uint64((ROUND_GAMMA * t) & _MASK64)
        z = _mix64_np(seeds[alive] + offset)
        u = (z >> np.uint64(11)) * _INV_2_53
        d = depth[alive]
        advance = u < p_adv[d]
        d = np.where(advance, d + 1, 0 if resets else d - 1)
        done = d == delta_h
        halted[alive[done]] = t
        depth[alive] = d
        alive = alive[~done]
    return halted


def simulate_halts(
    master_seed: int,
    n_trials: int,
    p_adv: np.ndarray,
    resets: bool,
    t_cap: int,
    backend: str | None = None,
) -> np.ndarray:
    """Halting round per trial (-1 where the round cap was hit)."""
    p_adv = np.ascontiguousarray(p_adv, dtype=np.float64)
    if active_backend(backend) == "numba":
        from ._numba_kernels import simulate_halts_nb

        out = np.empty(n_trials, dtype=np.int64)
        simulate_halts_nb(np.uint64(master_seed), p_adv, resets, t_cap, out)
        return out
    return _simulate_halts_np(master_seed, n_trials, p_adv, resets, t_cap)
