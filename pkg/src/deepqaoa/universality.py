"""Severing check on objective values and a dense Lie-closure probe.

An objective is *severing* when its values are pairwise distinct and all
differences ``f(z) - f(z')`` over ordered pairs ``z != z'`` are pairwise
distinct too. Severing objectives make the QAOA generators universal, which
``lie_closure_dim`` can confirm numerically for ``N <= 3``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .objective import ObjectiveTable, traceless

MAX_CLOSURE_BITS = 3
RANK_TOL = 1e-8
# relative to max |f|. A few ulps covers rounding in f(a) - f(b); wider
# windows admit chance collisions among the ~1e10 difference pairs of a
# random 9-bit table (1e-12 already catches a few percent of them).
DEFAULT_TOL = 1e-14


@dataclass(frozen=True)
class SeveringReport:
    severing: bool
    # None, "degenerate_values" or "degenerate_resonance"
    violation: str | None
    # (z, z') for values, ((z, z'), (t, t')) for resonance
    witness: tuple | None
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "severing": self.severing,
            "violation": self.violation,
            "witness": _listify(self.witness),
            "tolerance": self.tolerance,
        }

    def verdict(self) -> str:
        if self.severing:
            return "severing"
        if self.violation == "degenerate_values":
            z, zp = self.witness
            return f"not severing: degenerate_values f({z}) = f({zp})"
        (z, zp), (t, tp) = self.witness
        return f"not severing: degenerate_resonance f({z}) - f({zp}) = f({t}) - f({tp})"


def _listify(obj):
    if isinstance(obj, tuple):
        return [_listify(o) for o in obj]
    return obj


def _close_groups(sorted_vals: np.ndarray, tol: float) -> list[tuple[int, int]]:
    """Runs ``[start, stop)`` of sorted values linked by gaps ``<= tol``."""
    gaps = np.diff(sorted_vals) <= tol
    runs = []
    i = 0
    n = gaps.size
    while i < n:
        if gaps[i]:
            j = i
            while j < n and gaps[j]:
                j += 1
            runs.append((i, j + 1))
            i = j + 1
        else:
            i += 1
    return runs


def _oriented(a, b, diff) -> tuple[int, int]:
    """Ordered pair ``(z, z')`` with ``f(z) - f(z') >= 0``."""
    return (int(a), int(b)) if diff >= 0 else (int(b), int(a))


def check_severing(table: ObjectiveTable, tol: float = DEFAULT_TOL) -> SeveringReport:
    """Test both severing conditions; ``tol`` is relative to ``max |f|``.

    The witness returned is the lexicographically smallest violating pair.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    abs_tol = tol * table.sup_norm
    values = table.values
    dim = table.dim

    order = np.argsort(values, kind="stable")
    witnesses = []
    for start, stop in _close_groups(values[order], abs_tol):
        members = np.sort(order[start:stop])
        for a in range(members.size):
            for b in range(a + 1, members.size):
                if abs(values[members[a]] - values[members[b]]) <= abs_tol:
                    witnesses.append((int(members[a]), int(members[b])))
    if witnesses:
        return SeveringReport(False, "degenerate_values", min(witnesses), tol)

    # Ordered differences come in +/- pairs, so collisions among them are
    # collisions of |f(a) - f(b)| over unordered pairs a < b.
    a_idx, b_idx = np.triu_indices(dim, k=1)
    signed = values[a_idx] - values[b_idx]
    mags = np.abs(signed)
    order = np.argsort(mags, kind="stable")
    for start, stop in _close_groups(mags[order], abs_tol):
        members = order[start:stop]
        for i in range(members.size):
            for j in range(i + 1, members.size):
                p, q = members[i], members[j]
                if abs(mags[p] - mags[q]) > abs_tol:
                    continue
                first = _oriented(a_idx[p], b_idx[p], signed[p])
                second = _oriented(a_idx[q], b_idx[q], signed[q])
                # the same collision read with both differences negated
                flipped = (first[::-1], second[::-1])
                for cand in ((first, second), flipped):
                    witnesses.append(tuple(sorted(cand)))
    if witnesses:
        return SeveringReport(False, "degenerate_resonance", min(witnesses), tol)
    return SeveringReport(True, None, None, tol)


def dense_mixer(n_bits: int) -> np.ndarray:
    """Dense ``B = -sum_n X_n``."""
    dim = 1 << n_bits
    b = np.zeros((dim, dim))
    idx = np.arange(dim)
    for n in range(n_bits):
        b[idx, idx ^ (1 << n)] -= 1.0
    return b


@dataclass(frozen=True)
class ClosureResult:
    dimension: int
    converged: bool
    depth: int


def lie_closure(table: ObjectiveTable, max_depth: int = 20) -> ClosureResult:
    """Real dimension of the Lie algebra generated by ``iB`` and ``iC``.

    Elements are kept as an orthonormal basis under the Hilbert-Schmidt inner
    product (modified Gram-Schmidt, relative rank threshold ``RANK_TOL``).
    Each depth level commutes the newly added elements with the whole basis;
    the search stops at a fixpoint or after ``max_depth`` levels.
    """
    if table.n_bits > MAX_CLOSURE_BITS:
        raise ValueError(f"closure probe limited to N <= {MAX_CLOSURE_BITS}")
    b = 1j * dense_mixer(table.n_bits)
    c = 1j * np.diag(traceless(table).c_values)
    basis: list[np.ndarray] = []

    def add(x: np.ndarray) -> np.ndarray | None:
        norm0 = np.linalg.norm(x)
        if norm0 == 0.0:
            return None
        v = x / norm0
        for e in basis:
            v = v - np.vdot(e, v).real * e
        norm = np.linalg.norm(v)
        if norm <= RANK_TOL:
            return None
        v = v / norm
        basis.append(v)
        return v

    frontier = [v for v in (add(b), add(c)) if v is not None]
    depth = 0
    while frontier and depth < max_depth:
        depth += 1
        new = []
        for x in frontier:
            for y in list(basis):
                v = add(x @ y - y @ x)
                if v is not None:
                    new.append(v)
        frontier = new
    return ClosureResult(len(basis), not frontier, depth)


def lie_closure_dim(table: ObjectiveTable, max_depth: int = 20) -> int:
    return lie_closure(table, max_depth).dimension


def hypercube_bfs_count(n_bits: int) -> int:
    """Number of strings reachable from ``0`` through single bit flips."""
    seen = {0}
    queue = deque([0])
    while queue:
        z = queue.popleft()
        for n in range(n_bits):
            w = z ^ (1 << n)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen)


def mixer_graph_connected(n_bits: int) -> bool:
    """Connectivity of the graph on strings given by the nonzero entries of ``B``."""
    return hypercube_bfs_count(n_bits) == 1 << n_bits
