"""Matrix-free statevector kernel for the two QAOA gate families.

States are plain ``complex128`` arrays of length ``2^N``. Gates act in place;
``mixer_batch`` evaluates many mixer angles at once for the search loop.

Conventions::

    B   = -sum_n X_n
    U_B = exp(-i beta B) = prod_n (cos beta + i sin beta X_n)
    U_C = exp(-i gamma C),  C = diag(f - mean f)

Derivatives are taken along the trajectory ``beta -> exp(i beta B) psi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objective import MAX_BITS, ObjectiveTable, TracelessObjective


@dataclass(frozen=True)
class LayerParams:
    beta: float
    gamma: float


def n_bits_of(state: np.ndarray) -> int:
    n = int(state.shape[-1]).bit_length() - 1
    if 1 << n != state.shape[-1] or n < 1:
        raise ValueError(f"state length {state.shape[-1]} is not 2^N with N >= 1")
    return n


def _check_dim(state: np.ndarray, n_bits: int) -> None:
    if state.shape[-1] != 1 << n_bits:
        raise ValueError(f"state has length {state.shape[-1]}, objective needs {1 << n_bits}")


def plus_state(n_bits: int) -> np.ndarray:
    if not 1 <= n_bits <= MAX_BITS:
        raise ValueError(f"n_bits must lie in [1, {MAX_BITS}], got {n_bits}")
    dim = 1 << n_bits
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)


def basis_state(z: int, n_bits: int) -> np.ndarray:
    state = np.zeros(1 << n_bits, dtype=np.complex128)
    state[z] = 1.0
    return state


def apply_phase_separator(state: np.ndarray, gamma: float, c: TracelessObjective) -> np.ndarray:
    _check_dim(state, c.n_bits)
    state *= np.exp(-1j * gamma * c.c_values)
    return state


def _rotate_all_qubits(x: np.ndarray, cos: np.ndarray, isin: np.ndarray, n_bits: int) -> None:
    """Apply ``cos + i sin X`` on every qubit of the trailing axis of ``x``.

    ``cos`` and ``isin`` broadcast against ``x`` with the trailing axis dropped.
    """
    lead = x.shape[:-1]
    cos = cos[..., None, None]
    isin = isin[..., None, None]
    for n in range(n_bits):
        view = x.reshape(*lead, -1, 2, 1 << n)
        a0 = view[..., 0, :].copy()
        a1 = view[..., 1, :]
        view[..., 0, :] = cos * a0 + isin * a1
        view[..., 1, :] = cos * a1 + isin * a0


def apply_mixer(state: np.ndarray, beta: float) -> np.ndarray:
    n_bits = n_bits_of(state)
    _rotate_all_qubits(state, np.asarray(np.cos(beta)), np.asarray(1j * np.sin(beta)), n_bits)
    return state


def mixer_batch(states: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Apply ``U_B(beta_k)`` to every row of ``states`` for each ``beta_k``.

    ``states`` has shape ``(m, 2^N)``; the result has shape ``(len(betas), m, 2^N)``.
    """
    n_bits = n_bits_of(states)
    betas = np.asarray(betas, dtype=np.float64)
    out = np.broadcast_to(states, (betas.size, *states.shape)).copy()
    _rotate_all_qubits(out, np.cos(betas)[:, None], (1j * np.sin(betas))[:, None], n_bits)
    return out


def apply_layer(state: np.ndarray, params: LayerParams, c: TracelessObjective) -> np.ndarray:
    """One QAOA layer ``U_B(beta) U_C(gamma)``: phase separator first."""
    apply_phase_separator(state, params.gamma, c)
    return apply_mixer(state, params.beta)


def probabilities(state: np.ndarray) -> np.ndarray:
    return state.real**2 + state.imag**2


def norm_squared(state: np.ndarray) -> float:
    return float(probabilities(state).sum())


def expectation(state: np.ndarray, table: ObjectiveTable) -> float:
    """``<psi|H|psi>`` with the raw (not traceless) objective."""
    _check_dim(state, table.n_bits)
    return float(np.sum(probabilities(state) * table.values, axis=-1))


def apply_B(state: np.ndarray) -> np.ndarray:
    """Fresh vector ``B psi``, i.e. ``(B psi)_z = -sum_n psi_{z xor e_n}``."""
    n_bits = n_bits_of(state)
    out = np.zeros_like(state)
    for n in range(n_bits):
        view = state.reshape(-1, 2, 1 << n)
        target = out.reshape(-1, 2, 1 << n)
        target[:, 0, :] -= view[:, 1, :]
        target[:, 1, :] -= view[:, 0, :]
    return out


def grad_B(state: np.ndarray, table: ObjectiveTable) -> float:
    """First derivative of ``F(exp(i beta B) psi)`` at ``beta = 0``.

    Equals ``i <psi|[H, B]|psi> = -2 Im <H psi|B psi>``.
    """
    _check_dim(state, table.n_bits)
    h_psi = table.values * state
    return float(-2.0 * np.vdot(h_psi, apply_B(state)).imag)


def hess_B(state: np.ndarray, table: ObjectiveTable) -> float:
    """Second derivative of ``F(exp(i beta B) psi)`` at ``beta = 0``.

    Equals ``-<psi|[B,[B,H]]|psi> = 2 (<B psi|H|B psi> - Re <B H psi|B psi>)``.
    """
    _check_dim(state, table.n_bits)
    b_psi = apply_B(state)
    bh_psi = apply_B(table.values * state)
    term1 = np.vdot(b_psi, table.values * b_psi).real
    term2 = np.vdot(bh_psi, b_psi).real
    return float(2.0 * (term1 - term2))


def overlap_probability(state: np.ndarray, z: int) -> float:
    if not 0 <= z < state.shape[-1]:
        raise ValueError(f"string index {z} out of range")
    return float(abs(state[z]) ** 2)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """``0.5 * || |a><a| - |b><b| ||_1`` for normalized pure states."""
    overlap = abs(np.vdot(a, b)) ** 2
    return float(np.sqrt(max(0.0, 1.0 - overlap)))
