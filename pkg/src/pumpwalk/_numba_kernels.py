"""numba twins of the kernels in ``kernels.py``.

Imported lazily so a numpy-only environment never touches numba.  The
arithmetic mirrors the numpy implementations operation for operation;
the uniform stream is bit-identical by construction.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_STREAM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_ROUND_GAMMA = np.uint64(0xD1B54A32D192ED03)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 2.0**-53


@njit(cache=True)
def _mix64(x):
    z = x + _STREAM_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def dp_block_nb(v, mass, t0, p_adv, resets, target_cum, cum):
    n = v.size
    t = t0
    t_max = mass.size - 1
    new = np.zeros(n, dtype=np.float64)
    while t < t_max:
        t += 1
        for d in range(n):
            new[d] = 0.0
        absorbed = p_adv[n - 1] * v[n - 1]
        for d in range(n - 1):
            new[d + 1] = p_adv[d] * v[d]
        if resets:
            acc = 0.0
            for d in range(1, n):
                acc += v[d] - p_adv[d] * v[d]
            new[0] += acc
        else:
            for d in range(1, n):
                new[d - 1] += v[d] - p_adv[d] * v[d]
        for d in range(n):
            v[d] = new[d]
        mass[t] = absorbed
        cum += absorbed
        if cum >= target_cum:
            return t, cum, True
    return t, cum, False


@njit(cache=True)
def simulate_halts_nb(master_seed, p_adv, resets, t_cap, out):
    delta_h = p_adv.size
    for i in range(out.size):
        s = _mix64(master_seed + _STREAM_GAMMA * (np.uint64(i) + np.uint64(1)))
        d = 0
        halted = -1
        t = 0
        while t < t_cap:
            t += 1
            z = _mix64(s + _ROUND_GAMMA * np.uint64(t))
            u = (z >> np.uint64(11)) * _INV_2_53
            if u < p_adv[d]:
                d += 1
                if d == delta_h:
                    halted = t
                    break
            elif resets:
                d = 0
            else:
                d -= 1
        out[i] = halted
