"""Classical landscape diagnostics computed from the value table alone.

``mu(z)`` is the mean signed difference ``f(z') - f(z)`` over the ``N``
Hamming neighbours of ``z``. A basis state ``|z>`` sits in a trough of the
``iB`` direction exactly when ``mu(z) > 0``, and the radius of its valley (in
trace distance) is bounded by ``mu_tilde(z) / (2N)``.

The second-derivative operator used throughout is ``-[B,[B,H]]``, the
operator whose expectation is ``hess_B``; its spectral norm is at most
``4 N^2 ||c||``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objective import ObjectiveTable, traceless
from .statevector import apply_B, grad_B, hess_B

HIST_BINS = 64
MAX_EXHAUSTIVE_BITS = 20


class NotAValleyError(ValueError):
    """Raised when a string has ``mu <= 0`` and so is not a valley center."""


@dataclass(frozen=True)
class MuFPoint:
    z: int
    f_val: float
    mu: float
    mu_tilde: float
    eps_bound: float


@dataclass(frozen=True)
class DiagramStats:
    n_points: int
    frac_mu_positive: float
    pearson_f_mu: float
    pearson_degenerate: bool
    argmax_mu: int
    max_mu: float
    deepest_is_largest: bool
    # quartiles of mu over strings with mu > 0 (empty when none)
    mu_positive_quartiles: tuple[float, ...]
    f_range: tuple[float, float]
    mu_range: tuple[float, float]
    histogram: np.ndarray

    def to_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "frac_mu_positive": self.frac_mu_positive,
            "pearson_f_mu": self.pearson_f_mu,
            "pearson_degenerate": self.pearson_degenerate,
            "argmax_mu": self.argmax_mu,
            "max_mu": self.max_mu,
            "deepest_is_largest": self.deepest_is_largest,
            "mu_positive_quartiles": list(self.mu_positive_quartiles),
            "f_range": list(self.f_range),
            "mu_range": list(self.mu_range),
            "histogram_bins": HIST_BINS,
            "histogram": self.histogram.tolist(),
        }


def mu_all(table: ObjectiveTable) -> np.ndarray:
    """``mu(z)`` for every string at once."""
    idx = np.arange(table.dim, dtype=np.int64)
    values = table.values
    total = np.zeros(table.dim, dtype=np.float64)
    # differences summed neighbor by neighbor, so mu(z) agrees bit for bit
    for n in range(table.n_bits):
        total += values[idx ^ (1 << n)] - values
    return total / table.n_bits


def mu(table: ObjectiveTable, z: int) -> float:
    if not 0 <= z < table.dim:
        raise ValueError(f"string index {z} out of range")
    values = table.values
    total = 0.0
    for n in range(table.n_bits):
        total += values[z ^ (1 << n)] - values[z]
    return float(total / table.n_bits)


def _c_sup_norm(table: ObjectiveTable) -> float:
    c_norm = traceless(table).c_sup_norm
    if c_norm == 0.0:
        raise ValueError("mu_tilde is undefined for a constant objective")
    return c_norm


def mu_tilde(table: ObjectiveTable, z: int) -> float:
    return mu(table, z) / _c_sup_norm(table)


def epsilon_bound(table: ObjectiveTable, z: int) -> float:
    """Valley radius bound ``mu_tilde(z) / (2N)``."""
    m = mu(table, z)
    if m <= 0.0:
        raise NotAValleyError(f"string {z} has mu = {m:.3g} <= 0 and is not a valley center")
    return m / _c_sup_norm(table) / (2 * table.n_bits)


def f2b_norm_bound(table: ObjectiveTable) -> float:
    """Operator-norm bound ``4 N^2 ||c||`` on the second-derivative operator."""
    return 4.0 * table.n_bits**2 * traceless(table).c_sup_norm


def apply_f2b(vec: np.ndarray, table: ObjectiveTable) -> np.ndarray:
    """``-[B,[B,H]] v = -(BBH v - 2 BHB v + HBB v)``, matrix-free."""
    h = table.values
    b_v = apply_B(vec)
    bb_v = apply_B(b_v)
    bh_v = apply_B(h * vec)
    bbh_v = apply_B(bh_v)
    bhb_v = apply_B(h * b_v)
    return -(bbh_v - 2.0 * bhb_v + h * bb_v)


def f2b_norm_estimate(table: ObjectiveTable, iters: int = 200, seed: int = 0) -> float:
    """Power-iteration estimate of the spectral norm of ``-[B,[B,H]]``.

    The operator is real symmetric, so the ratio ``||A v_k|| / ||v_k||``
    is non-decreasing in ``k``; the running maximum is returned.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(table.dim)
    v /= np.linalg.norm(v)
    best = 0.0
    for _ in range(iters):
        w = apply_f2b(v, table).real
        norm = float(np.linalg.norm(w))
        best = max(best, norm)
        if norm == 0.0:
            break
        v = w / norm
    return best


def epsilon_bound_tight(table: ObjectiveTable, z: int, iters: int = 200) -> float:
    """``2 N mu(z) / ||F2||`` with the power-iteration norm in the denominator."""
    m = mu(table, z)
    if m <= 0.0:
        raise NotAValleyError(f"string {z} has mu = {m:.3g} <= 0 and is not a valley center")
    return 2 * table.n_bits * m / f2b_norm_estimate(table, iters)


def trough_membership(
    state: np.ndarray, table: ObjectiveTable, grad_tol: float = 1e-9, hess_tol: float = 0.0
) -> bool:
    if grad_tol <= 0 or hess_tol < 0:
        raise ValueError("grad_tol must be > 0 and hess_tol >= 0")
    return abs(grad_B(state, table)) < grad_tol and hess_B(state, table) > hess_tol


def mu_f_diagram(
    table: ObjectiveTable, sample_size: int | None = None, seed: int = 0
) -> list[MuFPoint]:
    """Points ``(f(z), mu(z))`` over all strings, or a uniform sample of them.

    Sampled strings are drawn without replacement and returned in index order.
    """
    mus = mu_all(table)
    if sample_size is None:
        if table.n_bits > MAX_EXHAUSTIVE_BITS:
            raise ValueError(f"exhaustive diagram limited to N <= {MAX_EXHAUSTIVE_BITS}; pass sample_size")
        zs = np.arange(table.dim)
    else:
        if not 1 <= sample_size <= table.dim:
            raise ValueError(f"sample_size must lie in [1, {table.dim}]")
        rng = np.random.default_rng(seed)
        zs = np.sort(rng.choice(table.dim, size=sample_size, replace=False))
    c_norm = traceless(table).c_sup_norm
    n = table.n_bits
    points = []
    for z in zs:
        m = float(mus[z])
        mt = m / c_norm if c_norm > 0 else 0.0
        eps = mt / (2 * n) if m > 0 else 0.0
        points.append(MuFPoint(int(z), float(table.values[z]), m, mt, eps))
    return points


def diagram_stats(points: list[MuFPoint], argmin_set) -> DiagramStats:
    if not points:
        raise ValueError("empty diagram")
    f = np.array([p.f_val for p in points])
    m = np.array([p.mu for p in points])
    zs = np.array([p.z for p in points])

    degenerate = bool(f.std() == 0.0 or m.std() == 0.0)
    pearson = 0.0 if degenerate else float(np.corrcoef(f, m)[0, 1])

    top = m.max()
    argmax = int(zs[m == top].min())
    positive = m[m > 0]
    quartiles = tuple(float(q) for q in np.quantile(positive, [0.25, 0.5, 0.75])) if positive.size else ()

    f_range = (float(f.min()), float(f.max()))
    mu_range = (float(m.min()), float(m.max()))
    hist, _, _ = np.histogram2d(
        f, m, bins=HIST_BINS, range=[_padded(f_range), _padded(mu_range)]
    )
    return DiagramStats(
        n_points=len(points),
        frac_mu_positive=float(positive.size / m.size),
        pearson_f_mu=pearson,
        pearson_degenerate=degenerate,
        argmax_mu=argmax,
        max_mu=float(top),
        deepest_is_largest=argmax in set(argmin_set),
        mu_positive_quartiles=quartiles,
        f_range=f_range,
        mu_range=mu_range,
        histogram=hist.astype(np.int64),
    )


def _padded(bounds: tuple[float, float]) -> tuple[float, float]:
    lo, hi = bounds
    if lo == hi:
        return lo - 0.5, hi + 0.5
    return lo, hi
