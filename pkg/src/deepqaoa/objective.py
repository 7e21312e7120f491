"""Pseudo-Boolean objectives stored as exhaustive value tables.

Bit ``i`` of a string index is the value of qubit ``i``, so ``z = 0b101``
on three bits means ``z(0) = 1, z(1) = 0, z(2) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_BITS = 24


def _check_bits(n_bits: int) -> None:
    if not 1 <= n_bits <= MAX_BITS:
        raise ValueError(f"n_bits must lie in [1, {MAX_BITS}], got {n_bits}")


def _bit_matrix(n_bits: int) -> np.ndarray:
    """(2^N, N) array of 0/1 entries, row z holds the bits of z."""
    idx = np.arange(1 << n_bits, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n_bits)) & 1).astype(np.float64)


@dataclass(frozen=True)
class ObjectiveTable:
    """Value table of ``f`` on all ``2^N`` strings plus cached summaries.

    ``kind`` and ``seed`` are provenance metadata used by the serializers.
    """

    n_bits: int
    values: np.ndarray
    kind: str = "table"
    seed: int | None = None
    f_min: float = field(init=False)
    f_max: float = field(init=False)
    mean: float = field(init=False)
    sup_norm: float = field(init=False)
    argmin_set: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        _check_bits(self.n_bits)
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size != 1 << self.n_bits:
            raise ValueError(f"expected {1 << self.n_bits} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("objective values must be finite")
        values.setflags(write=False)
        f_min = float(values.min())
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "f_min", f_min)
        object.__setattr__(self, "f_max", float(values.max()))
        object.__setattr__(self, "mean", float(values.mean()))
        object.__setattr__(self, "sup_norm", float(np.abs(values).max()))
        object.__setattr__(
            self, "argmin_set", tuple(int(z) for z in np.flatnonzero(values == f_min))
        )

    @property
    def dim(self) -> int:
        return 1 << self.n_bits

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, z: int) -> float:
        return float(self.values[z])


@dataclass(frozen=True)
class TracelessObjective:
    """``c(z) = f(z) - mean(f)``, the generator used by the phase separator."""

    n_bits: int
    c_values: np.ndarray
    c_sup_norm: float


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        clean = []
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n_vertices and 0 <= j < self.n_vertices):
                raise ValueError(f"edge ({i}, {j}) out of range for {self.n_vertices} vertices")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            clean.append(key)
        object.__setattr__(self, "edges", tuple(clean))


def from_values(values: Sequence[float], kind: str = "table", seed: int | None = None) -> ObjectiveTable:
    values = np.asarray(values, dtype=np.float64)
    n_bits = int(values.size).bit_length() - 1
    if values.size == 0 or 1 << n_bits != values.size:
        raise ValueError(f"number of values must be a power of two, got {values.size}")
    return ObjectiveTable(n_bits, values, kind=kind, seed=seed)


def _check_interval(lo: float, hi: float) -> None:
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")


def gen_uniform(n_bits: int, seed: int, lo: float = -1.0, hi: float = 1.0) -> ObjectiveTable:
    """I.i.d. values uniform on ``[lo, hi]``."""
    _check_bits(n_bits)
    _check_interval(lo, hi)
    rng = np.random.default_rng(seed)
    return ObjectiveTable(n_bits, rng.uniform(lo, hi, size=1 << n_bits), kind="uniform", seed=seed)


def gen_bimodal(n_bits: int, seed: int, lo: float = -1.0, hi: float = 1.0) -> ObjectiveTable:
    """I.i.d. values from an equal mixture of uniforms on the outer 20% bands.

    Draws land in ``[lo, lo + w]`` or ``[hi - w, hi]`` with ``w = 0.2 (hi - lo)``.
    """
    _check_bits(n_bits)
    _check_interval(lo, hi)
    rng = np.random.default_rng(seed)
    dim = 1 << n_bits
    width = 0.2 * (hi - lo)
    upper = rng.random(dim) < 0.5
    offset = rng.uniform(0.0, width, size=dim)
    values = np.where(upper, hi - width + offset, lo + offset)
    return ObjectiveTable(n_bits, values, kind="bimodal", seed=seed)


def random_qubo_matrix(n_bits: int, seed: int) -> np.ndarray:
    """Real symmetric matrix with unit spectral norm from symmetrized normals."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n_bits, n_bits))
    m = 0.5 * (a + a.T)
    norm = np.abs(np.linalg.eigvalsh(m)).max()
    return m / norm


def qubo_from_matrix(m: np.ndarray, kind: str = "qubo", seed: int | None = None) -> ObjectiveTable:
    """Evaluate ``f(z) = sum_ij z(i) M_ij z(j)`` on every 0/1 string."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("QUBO matrix must be square")
    n_bits = m.shape[0]
    _check_bits(n_bits)
    bits = _bit_matrix(n_bits)
    values = np.einsum("zi,ij,zj->z", bits, m, bits)
    return ObjectiveTable(n_bits, values, kind=kind, seed=seed)


def gen_qubo(n_bits: int, seed: int) -> ObjectiveTable:
    _check_bits(n_bits)
    return qubo_from_matrix(random_qubo_matrix(n_bits, seed), seed=seed)


def gen_random_graph(n_vertices: int, edge_prob: float, seed: int) -> Graph:
    """Erdos-Renyi graph; pairs are visited in lexicographic order."""
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob must be in [0, 1], got {edge_prob}")
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n_vertices) for j in range(i + 1, n_vertices)]
    keep = rng.random(len(pairs)) < edge_prob
    return Graph(n_vertices, tuple(p for p, k in zip(pairs, keep) if k))


def gen_maxcut(graph: Graph, seed: int | None = None) -> ObjectiveTable:
    """Negative cut size, so that minimizing ``f`` maximizes the cut."""
    _check_bits(graph.n_vertices)
    idx = np.arange(1 << graph.n_vertices, dtype=np.int64)
    cut = np.zeros(idx.size, dtype=np.float64)
    for i, j in graph.edges:
        cut += ((idx >> i) ^ (idx >> j)) & 1
    return ObjectiveTable(graph.n_vertices, -cut, kind="maxcut", seed=seed)


def traceless(table: ObjectiveTable) -> TracelessObjective:
    c = table.values - table.mean
    c.setflags(write=False)
    return TracelessObjective(table.n_bits, c, float(np.abs(c).max()))


def normalize_sup(table: ObjectiveTable) -> ObjectiveTable:
    """Rescale so that ``max |f| = 1``."""
    if table.sup_norm == 0.0:
        raise ValueError("cannot normalize an all-zero objective")
    if table.sup_norm == 1.0:
        return table
    return ObjectiveTable(table.n_bits, table.values / table.sup_norm, kind=table.kind, seed=table.seed)


KINDS = ("uniform", "bimodal", "qubo", "maxcut", "constant", "values")


@dataclass(frozen=True)
class ObjectiveSpec:
    """Recipe for an objective: everything needed to regenerate it exactly.

    ``constant`` and ``values`` are test hooks; ``values`` takes the table
    verbatim (its length fixes ``n_bits``).
    """

    kind: str = "qubo"
    n_bits: int = 9
    seed: int = 0
    lo: float = 0.0
    hi: float = 1.0
    edge_prob: float = 0.5
    constant: float = 0.0
    values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown objective kind {self.kind!r}; expected one of {KINDS}")

    def graph(self) -> Graph:
        return gen_random_graph(self.n_bits, self.edge_prob, self.seed)

    def build(self) -> ObjectiveTable:
        if self.kind == "uniform":
            return gen_uniform(self.n_bits, self.seed, self.lo, self.hi)
        if self.kind == "bimodal":
            return gen_bimodal(self.n_bits, self.seed, self.lo, self.hi)
        if self.kind == "qubo":
            return gen_qubo(self.n_bits, self.seed)
        if self.kind == "maxcut":
            return gen_maxcut(self.graph(), seed=self.seed)
        if self.kind == "constant":
            _check_bits(self.n_bits)
            return ObjectiveTable(self.n_bits, np.full(1 << self.n_bits, self.constant), kind="constant")
        return from_values(self.values, kind="values")
