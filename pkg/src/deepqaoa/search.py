"""Greedy grid local search over single QAOA layers.

Each round applies every layer ``U_B(beta) U_C(gamma)`` from a small grid
around the identity to the active state and keeps the candidate with the
lowest energy. The grid always contains ``(0, 0)``, so the active energy
never increases. Pure phase layers (``beta = 0``) keep the energy fixed
and sit before the identity in grid order, so a round with no improving
move rotates phases instead of standing still.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import landscape
from .metrics import approximation_ratios, success_probability
from .objective import ObjectiveSpec, ObjectiveTable, TracelessObjective, normalize_sup, traceless
from .statevector import (
    LayerParams,
    basis_state,
    grad_B,
    mixer_batch,
    plus_state,
    probabilities,
)

log = logging.getLogger(__name__)

BETA_STEPS = 11
GAMMA_STEPS = 5


class NoTrapError(ValueError):
    """The objective has no non-optimal string with ``mu > 0``."""


@dataclass(frozen=True)
class CandidateGrid:
    """Trial layers, ordered row-major with ``beta`` as the outer axis."""

    betas: np.ndarray
    gammas: np.ndarray
    epsilon: float
    range: float

    @property
    def pairs(self) -> list[LayerParams]:
        return [LayerParams(float(b), float(g)) for b in self.betas for g in self.gammas]

    def __len__(self) -> int:
        return self.betas.size * self.gammas.size

    def __getitem__(self, index: int) -> LayerParams:
        i, j = divmod(index, self.gammas.size)
        return LayerParams(float(self.betas[i]), float(self.gammas[j]))


def build_grid(
    epsilon: float, h_sup_norm: float, beta_steps: int = BETA_STEPS, gamma_steps: int = GAMMA_STEPS
) -> CandidateGrid:
    if epsilon <= 0 or h_sup_norm <= 0:
        raise ValueError("epsilon and h_sup_norm must be positive")
    if beta_steps % 2 == 0 or gamma_steps % 2 == 0:
        raise ValueError("step counts must be odd so the grid contains the identity")
    r = epsilon / h_sup_norm
    betas = np.linspace(-r, r, beta_steps)
    gammas = np.linspace(-r, r, gamma_steps)
    # linspace leaves rounding residue at the midpoint; pin it to exact zero
    betas[beta_steps // 2] = 0.0
    gammas[gamma_steps // 2] = 0.0
    return CandidateGrid(betas, gammas, float(epsilon), float(r))


@dataclass(frozen=True)
class RoundRecord:
    p: int
    chosen_beta: float
    chosen_gamma: float
    f_value: float
    success_prob: float
    approx_ratio_raw: float
    approx_ratio_norm: float
    grad_b_mag: float

    FIELDS = (
        "p",
        "beta",
        "gamma",
        "f_value",
        "success_prob",
        "approx_ratio_raw",
        "approx_ratio_norm",
        "grad_b_mag",
    )

    def row(self) -> tuple:
        return (
            self.p,
            self.chosen_beta,
            self.chosen_gamma,
            self.f_value,
            self.success_prob,
            self.approx_ratio_raw,
            self.approx_ratio_norm,
            self.grad_b_mag,
        )


def make_record(
    p: int, state: np.ndarray, table: ObjectiveTable, params: LayerParams, f_value: float | None = None
) -> RoundRecord:
    if f_value is None:
        f_value = float(np.sum(probabilities(state) * table.values))
    raw, norm = approximation_ratios(state, table)
    return RoundRecord(
        p=p,
        chosen_beta=params.beta,
        chosen_gamma=params.gamma,
        f_value=f_value,
        success_prob=success_probability(state, table.argmin_set),
        approx_ratio_raw=raw,
        approx_ratio_norm=norm,
        grad_b_mag=abs(grad_B(state, table)),
    )


def candidate_states(state: np.ndarray, grid: CandidateGrid, c: TracelessObjective) -> np.ndarray:
    """All ``len(grid)`` one-layer successors of ``state``, in grid order."""
    phased = state[None, :] * np.exp(-1j * grid.gammas[:, None] * c.c_values[None, :])
    return mixer_batch(phased, grid.betas).reshape(len(grid), -1)


def candidate_values(
    candidates: np.ndarray, grid: CandidateGrid, table: ObjectiveTable, f_current: float
) -> np.ndarray:
    """Energies of the candidates.

    Layers with ``beta = 0`` are pure phase rotations and leave every
    probability unchanged, so their energy is exactly ``f_current``; pinning
    it removes rounding noise from the tie-break.
    """
    # row-wise reduction: every row is summed in the same order
    values = np.sum(probabilities(candidates) * table.values, axis=1)
    values.reshape(grid.betas.size, grid.gammas.size)[grid.betas == 0.0, :] = f_current
    return values


def step(
    state: np.ndarray,
    grid: CandidateGrid,
    c: TracelessObjective,
    table: ObjectiveTable,
    p: int = 1,
    f_current: float | None = None,
) -> tuple[np.ndarray, RoundRecord]:
    """One search round; ties are broken by the lowest grid index.

    ``f_current`` is the active estimate carried over from the previous round
    (recomputed from ``state`` when omitted).
    """
    if f_current is None:
        f_current = float(np.sum(probabilities(state) * table.values))
    candidates = candidate_states(state, grid, c)
    values = candidate_values(candidates, grid, table, f_current)
    best = int(np.argmin(values))
    new_state = candidates[best].copy()
    return new_state, make_record(p, new_state, table, grid[best], float(values[best]))


def near_eigenstate_init(z: int, delta: float, n_bits: int) -> np.ndarray:
    """Normalized ``|z> + delta |+>``."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not 0 <= z < 1 << n_bits:
        raise ValueError(f"string index {z} out of range for {n_bits} bits")
    state = basis_state(z, n_bits) + delta * plus_state(n_bits)
    return state / np.linalg.norm(state)


def pick_trap_string(table: ObjectiveTable) -> int:
    """Non-optimal string with the largest ``mu > 0``, lowest index on ties."""
    mus = landscape.mu_all(table)
    mus[list(table.argmin_set)] = -np.inf
    z = int(np.argmax(mus))
    if not mus[z] > 0.0:
        raise NoTrapError("objective has no non-optimal string with mu > 0")
    return z


@dataclass(frozen=True)
class SearchConfig:
    objective: ObjectiveSpec = field(default_factory=ObjectiveSpec)
    epsilon: float = 0.1
    max_rounds: int = 1000
    # "plus", "near_eigenstate" (uses init_z) or "trap" (picks the string)
    init: str = "plus"
    init_z: int = 0
    delta: float = 0.1
    record_every: int = 1

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.init not in ("plus", "near_eigenstate", "trap"):
            raise ValueError(f"unknown init {self.init!r}")


def initial_state(config: SearchConfig, table: ObjectiveTable) -> tuple[np.ndarray, int | None]:
    """Initial state and the string it was built around (None for ``|+>``)."""
    if config.init == "plus":
        return plus_state(table.n_bits), None
    z = pick_trap_string(table) if config.init == "trap" else config.init_z
    return near_eigenstate_init(z, config.delta, table.n_bits), z


def local_search(
    table: ObjectiveTable,
    state: np.ndarray,
    epsilon: float,
    max_rounds: int,
    record_every: int = 1,
) -> tuple[np.ndarray, list[RoundRecord]]:
    """Run ``max_rounds`` rounds from ``state`` (not modified).

    Records are kept for rounds ``p`` with ``p % record_every == 0`` and for
    the last round; ``p`` counts layers applied so far.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    grid = build_grid(epsilon, table.sup_norm)
    c = traceless(table)
    records = []
    f_current = None
    for p in range(1, max_rounds + 1):
        state, record = step(state, grid, c, table, p, f_current)
        f_current = record.f_value
        if p % record_every == 0 or p == max_rounds:
            records.append(record)
    log.debug("search finished: %d rounds, final F=%.6g", max_rounds, records[-1].f_value)
    return state, records


def prepare_objective(spec: ObjectiveSpec) -> ObjectiveTable:
    """Build and sup-normalize the objective used by search runs."""
    return normalize_sup(spec.build())


def run(config: SearchConfig) -> tuple[np.ndarray, list[RoundRecord]]:
    table = prepare_objective(config.objective)
    state, _ = initial_state(config, table)
    return local_search(table, state, config.epsilon, config.max_rounds, config.record_every)
