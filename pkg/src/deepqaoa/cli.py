"""Command-line experiment runner.

    deepqaoa run        --config exp.ini --out out/
    deepqaoa landscape  --config exp.ini
    deepqaoa severing   --config exp.ini
    deepqaoa trap-demo  --config exp.ini
    deepqaoa sweep      --config exp.ini

Every subcommand is a pure function of its config; rerunning with the same
config reproduces the output files byte for byte.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import landscape, serialize
from .config import ExperimentConfig
from .metrics import longest_plateau, outcome_distribution
from .objective import ObjectiveTable
from .search import (
    NoTrapError,
    SearchConfig,
    initial_state,
    local_search,
    make_record,
    prepare_objective,
)
from .statevector import LayerParams
from .universality import MAX_CLOSURE_BITS, check_severing, lie_closure

log = logging.getLogger("deepqaoa")


def _record_dict(record) -> dict:
    return dict(zip(record.FIELDS, record.row()))


def execute_search(cfg: ExperimentConfig, scfg: SearchConfig, out: Path, command: str) -> dict:
    """Run one search and write records, distribution and summary under ``out``."""
    table = prepare_objective(scfg.objective)
    state0, z0 = initial_state(scfg, table)
    start = make_record(0, state0, table, LayerParams(0.0, 0.0))
    final, records = local_search(table, state0, scfg.epsilon, scfg.max_rounds, scfg.record_every)
    probs = outcome_distribution(final)

    formats = cfg.output.formats
    if "csv" in formats:
        serialize.write_records_csv(records, out / "records.csv")
        serialize.write_distribution_csv(probs, out / "distribution.csv")
        serialize.write_objective_csv(table, out / "objective.csv")
        if scfg.objective.kind == "maxcut":
            serialize.write_graph(scfg.objective.graph(), out / "graph.txt")

    last = records[-1]
    success = [r.success_prob for r in records]
    plateau_len, plateau_start = longest_plateau(success, 1e-9)
    summary = {
        "command": command,
        "config": cfg.to_dict(),
        "search": {
            "epsilon": scfg.epsilon,
            "max_rounds": scfg.max_rounds,
            "init": scfg.init,
            "delta": scfg.delta,
            "record_every": scfg.record_every,
        },
        "n_bits": table.n_bits,
        "f_min": table.f_min,
        "f_max": table.f_max,
        "argmin_set": list(table.argmin_set),
        "initial": _record_dict(start),
        "final": _record_dict(last),
        "success_prob": last.success_prob,
        "success_prob_change": last.success_prob - start.success_prob,
        "approx_ratio_norm_change": last.approx_ratio_norm - start.approx_ratio_norm,
        "max_grad_b_mag": max(r.grad_b_mag for r in records),
        "longest_success_plateau": {"length": plateau_len, "start_p": records[plateau_start].p},
        "argmax_probability": int(np.argmax(probs)),
    }
    if z0 is not None:
        summary["start_string"] = z0
        summary["final_weight_on_start_string"] = float(probs[z0])
    if "json" in formats:
        serialize.write_json(out / "summary.json", summary)
    log.info("%s: final success probability %.6g", command, last.success_prob)
    return summary


def cmd_run(cfg: ExperimentConfig) -> int:
    summary = execute_search(cfg, cfg.search_config(), Path(cfg.output.out_dir), "run")
    print(f"success_prob={summary['success_prob']!r}")
    return 0


def cmd_trap_demo(cfg: ExperimentConfig) -> int:
    td = cfg.trap_demo
    scfg = cfg.search_config(init="trap", epsilon=td.epsilon, max_rounds=td.max_rounds, delta=td.delta)
    try:
        summary = execute_search(cfg, scfg, Path(cfg.output.out_dir), "trap-demo")
    except NoTrapError as exc:
        print(f"no trap: {exc}", file=sys.stderr)
        return 1
    print(
        f"trap string {summary['start_string']}: weight {summary['final_weight_on_start_string']!r}, "
        f"success change {summary['success_prob_change']!r}"
    )
    return 0


def cmd_sweep(cfg: ExperimentConfig) -> int:
    out = Path(cfg.output.out_dir)
    rows = []
    for eps in cfg.sweep.epsilons:
        summary = execute_search(cfg, cfg.search_config(epsilon=eps), out / f"eps_{eps!r}", "sweep")
        rows.append(
            {
                "epsilon": eps,
                "final_success_prob": summary["success_prob"],
                "final_approx_ratio_norm": summary["final"]["approx_ratio_norm"],
                "longest_success_plateau": summary["longest_success_plateau"]["length"],
                "max_grad_b_mag": summary["max_grad_b_mag"],
            }
        )
        print(f"epsilon={eps!r} success_prob={summary['success_prob']!r}")
    if "json" in cfg.output.formats:
        serialize.write_json(out / "sweep.json", {"config": cfg.to_dict(), "runs": rows})
    return 0


def landscape_report(table: ObjectiveTable, cfg: ExperimentConfig) -> tuple[list, dict]:
    opts = cfg.landscape
    sample = opts.sample_size or None
    points = landscape.mu_f_diagram(table, sample, seed=opts.sample_seed)
    stats = landscape.diagram_stats(points, table.argmin_set).to_dict()
    stats.update(
        n_bits=table.n_bits,
        argmin_set=list(table.argmin_set),
        f_min=table.f_min,
        exhaustive=sample is None,
        f2b_norm_bound=landscape.f2b_norm_bound(table),
        f2b_norm_estimate=landscape.f2b_norm_estimate(table, opts.f2b_iters),
    )
    return points, stats


def cmd_landscape(cfg: ExperimentConfig) -> int:
    out = Path(cfg.output.out_dir)
    table = cfg.objective.build()
    points, stats = landscape_report(table, cfg)
    if "csv" in cfg.output.formats:
        serialize.write_mu_f_csv(points, out / "mu_f.csv")
    if "json" in cfg.output.formats:
        serialize.write_json(out / "stats.json", {"config": cfg.to_dict(), **stats})
    print(
        f"points={stats['n_points']} frac_mu_positive={stats['frac_mu_positive']!r} "
        f"deepest_is_largest={stats['deepest_is_largest']}"
    )
    return 0


def cmd_severing(cfg: ExperimentConfig) -> int:
    table = cfg.objective.build()
    report = check_severing(table, cfg.severing.tol)
    doc = {"config": cfg.to_dict(), **report.to_dict()}
    if table.n_bits <= MAX_CLOSURE_BITS:
        closure = lie_closure(table, cfg.severing.closure_depth)
        doc["lie_closure_dim"] = closure.dimension
        doc["lie_closure_converged"] = closure.converged
        doc["su_dim"] = 4**table.n_bits - 1
    if "json" in cfg.output.formats:
        serialize.write_json(Path(cfg.output.out_dir) / "severing.json", doc)
    print(report.verdict())
    return 0


COMMANDS = {
    "run": cmd_run,
    "landscape": cmd_landscape,
    "severing": cmd_severing,
    "trap-demo": cmd_trap_demo,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deepqaoa", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, type=Path, help="INI experiment config")
    parser.add_argument("--out", type=Path, help="output directory (overrides [output] out_dir)")
    parser.add_argument("--seed", type=int, help="override the objective seed")
    parser.add_argument(
        "--threads", type=int, help="thread cap; accepted for interface compatibility, the kernel is single-threaded"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = cfgmod.load(args.config)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
        if args.out is not None:
            cfg = cfg.with_out_dir(str(args.out))
        if args.threads is not None:
            log.info("--threads=%d ignored: single-threaded kernel", args.threads)
        return COMMANDS[args.command](cfg)
    except (ValueError, OSError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
