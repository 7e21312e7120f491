"""File formats: objective tables, edge lists, run records and reports.

Floats are written with ``repr`` so every file round-trips exactly and
identical runs give byte-identical output.
"""

from __future__ import annotations

import csv
import json
import math
import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .landscape import MuFPoint
from .objective import Graph, ObjectiveTable
from .search import RoundRecord

SCHEMA_VERSION = 1
_MAGIC = b"DQOT"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if not math.isfinite(obj) else float(obj)
    return obj


def write_json(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"schema_version": SCHEMA_VERSION, **data}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


# -- objective tables -------------------------------------------------------


def write_objective_csv(table: ObjectiveTable, path: Path) -> None:
    """``n_bits,kind,seed`` header row, then one value per line in index order."""
    path.parent.mkdir(parents=True, exist_ok=True)
    seed = "" if table.seed is None else str(table.seed)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("n_bits,kind,seed\n")
        fh.write(f"{table.n_bits},{table.kind},{seed}\n")
        for v in table.values:
            fh.write(repr(float(v)) + "\n")


def read_objective_csv(path: Path) -> ObjectiveTable:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "n_bits,kind,seed":
        raise ValueError(f"{path}: missing objective header")
    n_bits, kind, seed = lines[1].split(",")
    values = np.array([float(x) for x in lines[2:] if x.strip()])
    return ObjectiveTable(int(n_bits), values, kind=kind, seed=int(seed) if seed else None)


def write_objective_binary(table: ObjectiveTable, path: Path) -> None:
    """Little-endian: magic, uint32 N, uint32 len(kind), kind, int64 seed (-1 = none), float64 values."""
    path.parent.mkdir(parents=True, exist_ok=True)
    kind = table.kind.encode("utf-8")
    seed = -1 if table.seed is None else table.seed
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", table.n_bits, len(kind)))
        fh.write(kind)
        fh.write(struct.pack("<q", seed))
        fh.write(np.asarray(table.values, dtype="<f8").tobytes())


def read_objective_binary(path: Path) -> ObjectiveTable:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise ValueError(f"{path}: not an objective table file")
    n_bits, klen = struct.unpack_from("<II", data, 4)
    off = 12
    kind = data[off : off + klen].decode("utf-8")
    off += klen
    (seed,) = struct.unpack_from("<q", data, off)
    off += 8
    values = np.frombuffer(data, dtype="<f8", offset=off)
    return ObjectiveTable(n_bits, values, kind=kind, seed=None if seed == -1 else seed)


# -- graphs -----------------------------------------------------------------


def write_graph(graph: Graph, path: Path) -> None:
    """One ``i j`` pair per line after a ``# n_vertices=`` comment."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n_vertices={graph.n_vertices}\n")
        for i, j in graph.edges:
            fh.write(f"{i} {j}\n")


def read_graph(path: Path, n_vertices: int | None = None) -> Graph:
    edges = []
    declared = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "n_vertices=" in line:
                    declared = int(line.split("n_vertices=")[1])
                continue
            i, j = line.split()
            edges.append((int(i), int(j)))
    if n_vertices is None:
        n_vertices = declared if declared is not None else 1 + max((max(e) for e in edges), default=-1)
    return Graph(n_vertices, tuple(edges))


# -- simulator and run outputs ----------------------------------------------


def dump_statevector_csv(state: np.ndarray, path: Path) -> None:
    _write_rows(path, ("index", "real", "imag"), ((z, a.real, a.imag) for z, a in enumerate(state)))


def write_records_csv(records: Sequence[RoundRecord], path: Path) -> None:
    _write_rows(path, RoundRecord.FIELDS, (r.row() for r in records))


def read_records_csv(path: Path) -> list[RoundRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [
        RoundRecord(
            p=int(r["p"]),
            chosen_beta=float(r["beta"]),
            chosen_gamma=float(r["gamma"]),
            f_value=float(r["f_value"]),
            success_prob=float(r["success_prob"]),
            approx_ratio_raw=float(r["approx_ratio_raw"]),
            approx_ratio_norm=float(r["approx_ratio_norm"]),
            grad_b_mag=float(r["grad_b_mag"]),
        )
        for r in rows
    ]


def write_distribution_csv(probs: np.ndarray, path: Path) -> None:
    _write_rows(path, ("z_decimal", "probability"), enumerate(probs))


def write_mu_f_csv(points: Sequence[MuFPoint], path: Path) -> None:
    _write_rows(
        path,
        ("z_decimal", "f", "mu", "mu_tilde", "eps_bound"),
        ((p.z, p.f_val, p.mu, p.mu_tilde, p.eps_bound) for p in points),
    )
