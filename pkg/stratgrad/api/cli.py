"""
@file stratgrad/api/cli.py

Command-line front end.

    python -m stratgrad ph COMPLEX FILTER [--extended] [--max-degree D] [--output FILE]
    python -m stratgrad dist DIAGRAM_A DIAGRAM_B [--q Q]
    python -m stratgrad optimize CONFIG [--mode MODE] [--seed SEED] [--output-dir DIR]

Exit codes: 0 success (optimize: every run reached ||g|| <= eta), 2 parse or
validation failure, 3 optimize hit its iteration budget.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from stratgrad import settings
from stratgrad.api.experiments import build_problems, load_experiment_config, run_problem
from stratgrad.errors import StratgradError
from stratgrad.importers.files import (
    diagram_to_json,
    load_complex,
    load_diagram,
    load_filter,
    write_trace_csv,
)
from stratgrad.topology.complex import check_filter
from stratgrad.topology.metrics import wq_distance
from stratgrad.topology.persistence import persistence_extended, persistence_ordinary
from stratgrad.utils.logger import logger as app_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MAX_ITERS = 3


def cmd_ph(args) -> int:
    K = load_complex(args.complex)
    x = check_filter(K, load_filter(args.filter))
    compute = persistence_extended if args.extended else persistence_ordinary
    payload = json.dumps(diagram_to_json(compute(K, x, args.max_degree)), indent=2)
    if args.output:
        Path(args.output).write_text(payload)
        logger.info(f"diagram written to {args.output}")
    else:
        print(payload)
    return EXIT_OK


def cmd_dist(args) -> int:
    value, _ = wq_distance(load_diagram(args.diagram_a), load_diagram(args.diagram_b), args.q)
    print(repr(value))
    return EXIT_OK


def cmd_optimize(args) -> int:
    config = load_experiment_config(args.config)
    if args.mode:
        config.mode = args.mode
    if args.seed is not None:
        config.sgs.seed = args.seed
    out_dir = Path(args.output_dir or config.output_dir or settings.OUTPUT_DIR)
    out_dir.mkdir(parents=True, exist_ok=True)

    problems = build_problems(config)
    finals = {}
    all_converged = True
    for problem in problems:
        trace = run_problem(problem, config)
        suffix = "" if len(problems) == 1 else f"_{problem.name}"
        write_trace_csv(trace, out_dir / f"trace{suffix}.csv")
        finals[problem.name] = trace.final_x
        if config.write_diagrams and hasattr(problem.objective, "barcode"):
            with open(out_dir / f"diagrams{suffix}.jsonl", "w") as fh:
                for rec in trace.records:
                    bars = diagram_to_json(problem.objective.barcode(np.asarray(rec.x)))
                    fh.write(json.dumps({"k": rec.k, "intervals": bars}) + "\n")
        all_converged &= trace.reason == "GradientBelowEta"
        logger.info(f"{problem.name}: {trace.reason} after {trace.records[-1].k} iterations, f={trace.final_f:.6g}")

    final = finals[problems[0].name] if len(problems) == 1 else finals
    (out_dir / "final_filter.json").write_text(json.dumps(final))
    return EXIT_OK if all_converged else EXIT_MAX_ITERS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stratgrad", description="Stratified gradient sampling for persistence losses")
    sub = parser.add_subparsers(dest="command", required=True)

    ph = sub.add_parser("ph", help="compute a persistence barcode")
    ph.add_argument("complex", help="complex JSON file")
    ph.add_argument("filter", help="filter JSON or CSV file")
    ph.add_argument("--extended", action="store_true", help="extended persistence")
    ph.add_argument("--max-degree", type=int, default=0)
    ph.add_argument("--output", help="write the diagram here instead of stdout")
    ph.set_defaults(handler=cmd_ph)

    dist = sub.add_parser("dist", help="q-Wasserstein distance between two diagrams")
    dist.add_argument("diagram_a")
    dist.add_argument("diagram_b")
    dist.add_argument("--q", type=float, default=2.0)
    dist.set_defaults(handler=cmd_dist)

    opt = sub.add_parser("optimize", help="run an experiment")
    opt.add_argument("config", help="experiment JSON file")
    opt.add_argument("--mode", choices=["SGS", "GD", "GDwD", "GS"])
    opt.add_argument("--seed", type=int)
    opt.add_argument("--output-dir", help=f"defaults to $STRATGRAD_OUTPUT_DIR or '{settings.OUTPUT_DIR}'")
    opt.set_defaults(handler=cmd_optimize)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (StratgradError, ValidationError, OSError, ValueError, KeyError) as e:
        app_logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
