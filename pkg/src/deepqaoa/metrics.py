"""Per-round quantities reported by the search runs."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .objective import ObjectiveTable
from .statevector import expectation, probabilities


def success_probability(state: np.ndarray, argmin_set: Sequence[int]) -> float:
    """Total measurement weight on the optimal strings."""
    if len(argmin_set) == 0:
        raise ValueError("argmin_set must be nonempty")
    return float(probabilities(state[list(argmin_set)]).sum())


def approximation_ratios(state: np.ndarray, table: ObjectiveTable) -> tuple[float, float]:
    """Return ``(<H> / f_min, (f_max - <H>) / (f_max - f_min))``.

    The raw ratio is NaN when ``f_min == 0``. The normalized ratio is 1 for a
    constant objective, where every state is optimal.
    """
    value = expectation(state, table)
    raw = value / table.f_min if table.f_min != 0.0 else math.nan
    spread = table.f_max - table.f_min
    if spread == 0.0:
        return raw, 1.0
    norm = (table.f_max - value) / spread
    return raw, min(1.0, max(0.0, norm))


def outcome_distribution(state: np.ndarray) -> np.ndarray:
    return probabilities(state)


def gradient_trace(records: Iterable) -> list[tuple[int, float]]:
    return [(r.p, r.grad_b_mag) for r in records]


def longest_plateau(values: Sequence[float], tol: float = 1e-9) -> tuple[int, int]:
    """Longest run of consecutive entries within ``tol`` of the run's first entry.

    Returns ``(length, start_index)``; an empty input gives ``(0, 0)``.
    """
    best_len, best_start = 0, 0
    start = 0
    for i in range(len(values) + 1):
        if i == len(values) or abs(values[i] - values[start]) > tol:
            if i - start > best_len:
                best_len, best_start = i - start, start
            start = i
    return best_len, best_start
