"""Dense density-matrix oracle for the pumping circuit.

A direct, gate-by-gate simulation (at most 5 qubits, so 32x32 complex
matrices) used to validate the analytic model against actual quantum
mechanics.  Nothing here reuses the closed forms being checked: states
evolve by explicit unitaries and measurement projectors.

Conventions, fixed once and relied on by the tests:

* Qubit 0 is the leftmost kron factor (most significant index bit).
* The pumping layout is [L1, L2, A1, A2]; the round applies X then H
  on A1, CZ(A1, L1) and CZ(A2, L2), measures A1 in the Y basis and
  A2 in the X basis.
* The Y outcome's by-product is undone by the fixed phase corrections
  ``S^dag`` on L1 and A2 for outcome +1 and ``S`` on both for outcome
  -1 (determined constructively: they are the unique phase gates that
  turn the noiseless post-measurement branch back into the state with
  A2 graph-linked to both logical qubits, for any logical input).
* The X outcome ``m`` is +1 for the |+> result; the logical pair is
  then projected onto parity ``m * (-1)**e`` where ``e`` flags the
  ancilla dephasing branch.
* Parity projectors are standard (idempotent) projectors.  Model
  equations written with rescaled projectors are compared after
  normalization, which absorbs the scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import DephasingChannel, sequence_probability
from .errors import OracleCheckError

__all__ = [
    "MAX_QUBITS",
    "BranchOutcome",
    "make_graph_state",
    "noisy_bell_pair",
    "pumping_round",
    "verify_parity_map",
    "bilateral_distill_step",
    "bell_diagonal_state",
    "bell_weights",
    "even_projector",
    "odd_projector",
    "even_parity_weight",
    "trace_distance",
    "check_density",
]

MAX_QUBITS = 5

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
S = np.array([[1, 0], [0, 1j]], dtype=np.complex128)

_KET_PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2.0)
_KET_MINUS = np.array([1, -1], dtype=np.complex128) / np.sqrt(2.0)
_KET_PLUS_I = np.array([1, 1j], dtype=np.complex128) / np.sqrt(2.0)
_KET_MINUS_I = np.array([1, -1j], dtype=np.complex128) / np.sqrt(2.0)


def _expand(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    full = np.array([[1.0 + 0.0j]])
    for q in range(n):
        full = np.kron(full, op if q == qubit else I2)
    return full


def _cz(n: int, i: int, j: int) -> np.ndarray:
    idx = np.arange(1 << n)
    bi = (idx >> (n - 1 - i)) & 1
    bj = (idx >> (n - 1 - j)) & 1
    return np.diag((1.0 - 2.0 * (bi & bj)).astype(np.complex128))


def _projector(ket: np.ndarray) -> np.ndarray:
    return np.outer(ket, ket.conj())


def partial_trace(rho: np.ndarray, keep: list[int], n: int) -> np.ndarray:
    """Trace out every qubit not in ``keep`` (order among kept preserved)."""
    r = rho.reshape((2,) * (2 * n))
    for q in sorted((q for q in range(n) if q not in keep), reverse=True):
        half = r.ndim // 2
        r = np.trace(r, axis1=q, axis2=q + half)
    dim = 1 << len(keep)
    return r.reshape(dim, dim)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.linalg.eigvalsh(a - b)).sum())


def check_density(rho: np.ndarray, tol: float = 1e-10) -> None:
    """Validate hermiticity, unit trace and positivity (to ``tol``)."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density operator must be square, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density operator is not hermitian")
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ValueError(f"density operator trace is {np.trace(rho)}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density operator has a negative eigenvalue")


def make_graph_state(n_qubits: int, edges: list[tuple[int, int]]) -> np.ndarray:
    """State vector of the graph state: |+>^n with one CZ per edge."""
    if not (1 <= n_qubits <= MAX_QUBITS):
        raise ValueError(f"qubit count must lie in 1..{MAX_QUBITS}, got {n_qubits}")
    dim = 1 << n_qubits
    psi = np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)
    idx = np.arange(dim)
    for i, j in edges:
        if not (0 <= i < n_qubits and 0 <= j < n_qubits) or i == j:
            raise ValueError(f"invalid edge ({i}, {j}) for {n_qubits} qubits")
        bi = (idx >> (n_qubits - 1 - i)) & 1
        bj = (idx >> (n_qubits - 1 - j)) & 1
        psi = psi * (1.0 - 2.0 * (bi & bj))
    return psi


# -- two-qubit parity structure ----------------------------------------------


def even_projector() -> np.ndarray:
    """Projector onto the even-parity span {|00>, |11>}."""
    return np.diag(np.array([1, 0, 0, 1], dtype=np.complex128))


def odd_projector() -> np.ndarray:
    return np.diag(np.array([0, 1, 1, 0], dtype=np.complex128))


def even_parity_weight(rho: np.ndarray) -> float:
    """Population of the even-parity span; the state's parity fidelity."""
    return float(np.real(rho[0, 0] + rho[3, 3]))


def _bell_basis() -> np.ndarray:
    phi = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2.0)
    kets = [phi]
    for op in (X, Z, Y):
        kets.append(np.kron(op, I2) @ phi)
    return np.array(kets)


def bell_diagonal_state(a: float, b: float, c: float, d: float) -> np.ndarray:
    """Density operator with weights (a, b, c, d) on (Phi, X Phi, Z Phi, Y Phi)."""
    kets = _bell_basis()
    weights = (a, b, c, d)
    rho = np.zeros((4, 4), dtype=np.complex128)
    for w, ket in zip(weights, kets):
        rho += w * _projector(ket)
    return rho


def bell_weights(rho: np.ndarray) -> np.ndarray:
    """Diagonal of ``rho`` in the Bell basis, ordered as in ``bell_diagonal_state``."""
    kets = _bell_basis()
    return np.array([np.real(ket.conj() @ rho @ ket) for ket in kets])


def noisy_bell_pair(epsilon: float) -> np.ndarray:
    """Odd-parity pair (|01> + |10>)/sqrt(2) dephased on one qubit with rate ``epsilon``."""
    if not (0.0 <= epsilon <= 0.5):
        raise ValueError(f"epsilon must lie in [0, 0.5], got {epsilon}")
    psi = np.array([0, 1, 1, 0], dtype=np.complex128) / np.sqrt(2.0)
    flipped = np.kron(Z, I2) @ psi
    return (1.0 - epsilon) * _projector(psi) + epsilon * _projector(flipped)


# -- the pumping round ---------------------------------------------------------

_L1, _L2, _A1, _A2 = 0, 1, 2, 3


@dataclass(frozen=True)
class BranchOutcome:
    """One measurement branch of a pumping round.

    ``m`` is the X-basis outcome on A2, ``e`` flags the dephased
    ancilla branch, ``weight`` the joint branch probability and
    ``state`` the normalized post-measurement logical pair.
    """

    m: int
    e: int
    weight: float
    state: np.ndarray


@lru_cache(maxsize=1)
def _round_ops() -> dict:
    n = 4
    u = (
        _cz(n, _A1, _L1)
        @ _cz(n, _A2, _L2)
        @ _expand(H, _A1, n)
        @ _expand(X, _A1, n)
    )
    s_dag = S.conj().T
    correct = {
        +1: _expand(s_dag, _L1, n) @ _expand(s_dag, _A2, n),
        -1: _expand(S, _L1, n) @ _expand(S, _A2, n),
    }
    y_proj = {+1: _expand(_projector(_KET_PLUS_I), _A1, n),
              -1: _expand(_projector(_KET_MINUS_I), _A1, n)}
    x_proj = {+1: _expand(_projector(_KET_PLUS), _A2, n),
              -1: _expand(_projector(_KET_MINUS), _A2, n)}
    psi = np.array([0, 1, 1, 0], dtype=np.complex128) / np.sqrt(2.0)
    ancilla = {0: _projector(psi), 1: _projector(np.kron(Z, I2) @ psi)}
    return {"u": u, "correct": correct, "y": y_proj, "x": x_proj, "ancilla": ancilla}


def pumping_round(logical_rho: np.ndarray, epsilon: float) -> list[BranchOutcome]:
    """One full pumping round on a two-qubit logical state.

    Returns every branch over the X outcome ``m`` and the dephasing
    flag ``e`` with nonzero prior, weights summing to one.  The two Y
    outcomes are merged after their by-product corrections, which make
    the branches coincide.
    """
    if not (0.0 <= epsilon <= 0.5):
        raise ValueError(f"epsilon must lie in [0, 0.5], got {epsilon}")
    logical_rho = np.asarray(logical_rho, dtype=np.complex128)
    if logical_rho.shape != (4, 4):
        raise ValueError(f"logical state must be 4x4, got {logical_rho.shape}")
    check_density(logical_rho)
    ops = _round_ops()
    branches: list[BranchOutcome] = []
    for e, prior in ((0, 1.0 - epsilon), (1, epsilon)):
        if prior == 0.0:
            continue
        rho = np.kron(logical_rho, ops["ancilla"][e])
        rho = ops["u"] @ rho @ ops["u"].conj().T
        corrected = []
        for y in (+1, -1):
            p_y = ops["y"][y]
            c = ops["correct"][y]
            corrected.append(c @ (p_y @ rho @ p_y) @ c.conj().T)
        for m in (+1, -1):
            p_m = ops["x"][m]
            acc = np.zeros((4, 4), dtype=np.complex128)
            for rho_y in corrected:
                sub = p_m @ rho_y @ p_m
                acc += partial_trace(sub, [_L1, _L2], 4)
            w = float(np.trace(acc).real)
            if w <= 0.0:
                continue  # outcome unreachable from this input
            branches.append(BranchOutcome(m=m, e=e, weight=prior * w, state=acc / w))
    return branches


def verify_parity_map(epsilon: float, outcomes: list[int] | tuple[int, ...]) -> float:
    """Drive the circuit through an outcome sequence and compare to the model.

    Starting from the edgeless two-qubit graph state |++>, each round is
    conditioned on the given X outcome.  After every prefix the
    conditional logical state is compared with the model map: parity
    projections of |++> reweighted by ``alpha**(+-delta)`` with
    ``delta`` the running outcome sum.  Returns the largest trace
    distance seen.  The realized sequence probability is cross-checked
    against the signed-walk closed form and a mismatch raises
    ``OracleCheckError``.
    """
    if not 1 <= len(outcomes) <= 4:
        raise ValueError("outcome sequences must have 1 to 4 entries")
    if any(m not in (-1, 1) for m in outcomes):
        raise ValueError("outcomes must be +1 or -1")
    # epsilon == 0 degenerates: only monotone sequences occur and the
    # model prediction is a bare parity projection.
    channel = DephasingChannel(epsilon) if epsilon > 0.0 else None
    psi0 = make_graph_state(2, [])
    rho0 = _projector(psi0)
    even = even_projector() @ rho0 @ even_projector()
    odd = odd_projector() @ rho0 @ odd_projector()

    rho = rho0
    delta = 0
    p_seq = 1.0
    max_td = 0.0
    for m in outcomes:
        matching = [b for b in pumping_round(rho, epsilon) if b.m == m]
        p_m = sum(b.weight for b in matching)
        # At epsilon == 0 every realizable conditional outcome has
        # probability 1/2 or 1; anything below that is projector dust.
        if p_m <= (0.25 if channel is None else 0.0):
            raise ValueError(
                f"outcome sequence {list(outcomes)} has zero probability "
                f"at epsilon={epsilon}"
            )
        rho = sum(b.weight * b.state for b in matching) / p_m
        p_seq *= p_m
        delta += m
        if channel is None:
            predicted = even if delta > 0 else odd
        else:
            w_even = np.exp(delta * 2.0 * channel.log_alpha)
            predicted = w_even * even + odd
        predicted = predicted / np.trace(predicted).real
        max_td = max(max_td, trace_distance(rho, predicted))
    if channel is None:
        p_model = 0.5 if len(set(outcomes)) == 1 else 0.0
    else:
        p_model = sequence_probability(channel, list(outcomes))
    if abs(p_seq - p_model) > 1e-9 * max(p_model, 1e-300):
        raise OracleCheckError(
            f"sequence probability {p_seq!r} disagrees with the signed-walk "
            f"closed form {p_model!r} for outcomes {list(outcomes)}"
        )
    return max_td


# -- post-selected bilateral pumping -------------------------------------------

_C1, _C2, _T1, _T2 = 0, 1, 2, 3


def bilateral_distill_step(
    control_rho: np.ndarray, target_rho: np.ndarray
) -> tuple[np.ndarray, float]:
    """One post-selected round: CZ from each control qubit onto its target.

    Both controls are X-measured; the round succeeds when the outcomes
    agree (even joint parity).  Returns the normalized post-selected
    target state and the raw success probability.
    """
    for rho in (control_rho, target_rho):
        if np.asarray(rho).shape != (4, 4):
            raise ValueError("control and target must be two-qubit density operators")
        check_density(np.asarray(rho))
    n = 4
    rho = np.kron(np.asarray(control_rho, dtype=np.complex128),
                  np.asarray(target_rho, dtype=np.complex128))
    u = _cz(n, _C1, _T1) @ _cz(n, _C2, _T2)
    rho = u @ rho @ u.conj().T
    out = np.zeros((4, 4), dtype=np.complex128)
    for sign, ket in ((+1, _KET_PLUS), (-1, _KET_MINUS)):
        proj = _expand(_projector(ket), _C1, n) @ _expand(_projector(ket), _C2, n)
        sub = proj @ rho @ proj
        out += partial_trace(sub, [_T1, _T2], 4)
    p = float(np.trace(out).real)
    if p <= 0.0:
        raise OracleCheckError("post-selection succeeded with probability zero")
    return out / p, p
