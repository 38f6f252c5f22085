"""Independent reference computations used by the tests.

Everything is rebuilt from the two-hypothesis description of the
measurement record in exact rational arithmetic: a pair either carries
a phase flip (probability eps) or not, each round's outcome agrees
with the hidden hypothesis with probability 1 - eps, and a specific
outcome string with ``plus`` agreements and ``minus`` disagreements
therefore has probability

    ((1-eps)^plus * eps^minus + eps^plus * (1-eps)^minus) / 2.

Nothing here imports the package, so these values cannot inherit its
bugs.
"""

from __future__ import annotations

from fractions import Fraction


def record_weight(eps: Fraction, plus: int, minus: int) -> Fraction:
    """Probability of one specific outcome string with the given sign counts."""
    return ((1 - eps) ** plus * eps**minus + eps**plus * (1 - eps) ** minus) / 2


def posterior_fidelity(eps: Fraction, delta: int) -> Fraction:
    """Even-parity posterior after a net outcome sum ``delta``."""
    d = abs(delta)
    num = (1 - eps) ** d
    return num / (num + eps**d)


def advance_probability(eps: Fraction, d: int) -> Fraction:
    """Chance the next outcome agrees with a net record of magnitude ``d``.

    Ratio of record weights; by construction it depends only on the
    net count difference, never on how the record got there.
    """
    num = (1 - eps) ** (d + 1) + eps ** (d + 1)
    den = (1 - eps) ** d + eps**d
    return num / den


def nps_halting_masses(eps: Fraction, delta_h: int, t_max: int) -> dict[int, Fraction]:
    """First-passage mass by exhaustive enumeration of signed outcome strings."""
    masses: dict[int, Fraction] = {}

    def go(t: int, delta: int, plus: int, minus: int) -> None:
        if abs(delta) == delta_h:
            masses[t] = masses.get(t, Fraction(0)) + record_weight(eps, plus, minus)
            return
        if t == t_max:
            return
        go(t + 1, delta + 1, plus + 1, minus)
        go(t + 1, delta - 1, plus, minus + 1)

    go(0, 0, 0, 0)
    return masses


def ps_halting_masses(eps: Fraction, delta_h: int, t_max: int) -> dict[int, Fraction]:
    """Reset variant: a disagreement closes the attempt, a fresh pair starts.

    The disagreeing outcome still belongs to the discarded attempt, so
    each closed attempt of j agreements contributes record_weight(j, 1)
    and the halting attempt contributes record_weight(delta_h, 0).
    """
    masses: dict[int, Fraction] = {}

    def go(t: int, run: int, plus: int, minus: int, acc: Fraction) -> None:
        if abs(run) == delta_h:
            masses[t] = masses.get(t, Fraction(0)) + acc * record_weight(eps, plus, minus)
            return
        if t == t_max:
            return
        for m in (1, -1):
            if run == 0 or (m > 0) == (run > 0):
                go(t + 1, run + m, plus + (m > 0), minus + (m < 0), acc)
            else:
                closed = record_weight(eps, plus + (m > 0), minus + (m < 0))
                go(t + 1, 0, 0, 0, acc * closed)

    go(0, 0, 0, 0, Fraction(1))
    return masses


def first_passage_path_count(delta_h: int, t: int) -> int:
    """Number of signed walks from 0 that first touch +-delta_h at step t."""
    count = 0

    def go(step: int, delta: int) -> None:
        nonlocal count
        if abs(delta) == delta_h:
            if step == t:
                count += 1
            return
        if step == t:
            return
        go(step + 1, delta + 1)
        go(step + 1, delta - 1)

    go(0, 0)
    return count


def _solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col]
        m[col] = [x / inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def mean_rounds_exact(eps: Fraction, delta_h: int, resets: bool) -> Fraction:
    """First-step analysis over the folded transient states, exactly."""
    n = delta_h
    a = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(1)] * n
    for d in range(n):
        a[d][d] += 1
        p_up = Fraction(1) if d == 0 else advance_probability(eps, d)
        if d + 1 < n:
            a[d][d + 1] -= p_up
        if d > 0:
            down = 0 if resets else d - 1
            a[d][down] -= 1 - p_up
    return _solve(a, rhs)[0]


def expected_fidelity_exact(eps: Fraction, delta_h: int, eta: Fraction, resets: bool) -> Fraction:
    """F(delta_h) * (1 - eta * <T>); valid while no survival factor clamps."""
    mean = mean_rounds_exact(eps, delta_h, resets)
    return posterior_fidelity(eps, delta_h) * (1 - eta * mean)
