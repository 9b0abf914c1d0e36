"""
@file stratgrad/api/experiments.py

Turns an ExperimentConfig into concrete (objective, starting point) problems
and runs the chosen optimizer on each.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from stratgrad.base_objective import StratifiedObjective
from stratgrad.errors import ConfigError
from stratgrad.importers.files import load_complex, load_diagram, load_filter
from stratgrad.importers.generators import (
    bootstrap_graphs,
    cycle_complex,
    direction_filter,
    embedded_cycle_graph,
    path_complex,
    registration_target,
    uniform_start,
)
from stratgrad.models import BaselineConfig, Barcode, ExperimentConfig, OptimizerTrace
from stratgrad.objectives.persistence_losses import (
    JointFrechetObjective,
    RegistrationObjective,
    TotalPersistenceObjective,
)
from stratgrad.objectives.toy import CreaseObjective
from stratgrad.optim.baselines import baseline_run
from stratgrad.optim.sgs import sgs_run
from stratgrad.topology.persistence import persistence_extended

logger = logging.getLogger(__name__)

FIG1_START = [0.8, 0.8]
TOTAL_PERS_START = [0.4, 0.72, 0.0, 0.3, 0.14]
FRECHET_CAP = 150


@dataclass
class Problem:
    name: str
    objective: StratifiedObjective
    x0: np.ndarray
    restarts: List[np.ndarray] = field(default_factory=list)


def load_experiment_config(path) -> ExperimentConfig:
    """
    Parse a JSON experiment file and resolve its file references.

    Relative paths are taken relative to the config file.

    Raises:
        ConfigError: if a referenced file is missing.
    """
    path = Path(path)
    with open(path) as fh:
        config = ExperimentConfig.model_validate(json.load(fh))
    base = path.parent

    def resolve(ref: Optional[str]) -> Optional[str]:
        if ref is None:
            return None
        p = Path(ref)
        if not p.is_absolute():
            p = base / p
        if not p.exists():
            raise ConfigError(f"referenced file does not exist: {ref}")
        return str(p)

    config.complex = resolve(config.complex)
    config.filter = resolve(config.filter)
    if config.target is not None:
        config.target.complex = resolve(config.target.complex)
        config.target.filter = resolve(config.target.filter)
        config.target.diagram = resolve(config.target.diagram)
    return config


def _start(config: ExperimentConfig, default) -> np.ndarray:
    if config.filter is not None:
        return load_filter(config.filter)
    if config.x0 is not None:
        return np.asarray(config.x0, dtype=float)
    return np.asarray(default, dtype=float)


def registration_target_barcode(config: ExperimentConfig) -> Barcode:
    """Target diagram from a file, a (complex, filter) pair or the built-in generator."""
    spec = config.target
    if spec is not None and spec.diagram is not None:
        return load_diagram(spec.diagram)
    if spec is not None and spec.complex is not None:
        K = load_complex(spec.complex)
        return persistence_extended(K, load_filter(spec.filter), 0)
    params = dict(spec.generator) if spec is not None and spec.generator else {}
    n = int(params.get("n", 120))
    F = registration_target(n=n, noise=float(params.get("noise", 0.1)), seed=int(params.get("seed", config.sgs.seed)))
    return persistence_extended(cycle_complex(n), F, 0)


def build_problems(config: ExperimentConfig) -> List[Problem]:
    sgs = config.sgs
    if config.experiment == "fig1":
        return [Problem("fig1", CreaseObjective(10.0), _start(config, FIG1_START))]

    if config.experiment == "total-pers":
        K = load_complex(config.complex) if config.complex else path_complex(5)
        obj = TotalPersistenceObjective(K, cap=sgs.cap, search=sgs.search)
        return [Problem("total-pers", obj, _start(config, TOTAL_PERS_START))]

    if config.experiment == "registration":
        target = registration_target_barcode(config)
        K = cycle_complex(config.template_size)
        obj = RegistrationObjective(K, target, q=config.q, cap=sgs.cap, search=sgs.search)
        if config.filter is None and config.x0 is None:
            starts = [uniform_start(config.template_size, sgs.seed + i) for i in range(config.n_starts)]
            return [Problem("registration", obj, starts[0], restarts=starts[1:])]
        x0 = _start(config, None)
        if x0.shape[0] != K.n_vertices:
            raise ConfigError(f"x0 has {x0.shape[0]} entries, template has {K.n_vertices} vertices")
        return [Problem("registration", obj, x0)]

    K, coords = embedded_cycle_graph(seed=sgs.seed)
    copies = bootstrap_graphs(k=config.n_bootstrap, seed=sgs.seed)
    targets = [[persistence_extended(Ki, direction_filter(pts, angle), 0) for Ki, pts in copies]
               for angle in config.directions]
    obj = JointFrechetObjective(K, targets, config.directions, cap=sgs.cap or FRECHET_CAP, search=sgs.search)
    x0 = _start(config, coords.ravel())
    if x0.shape[0] != 2 * K.n_vertices:
        raise ConfigError(f"x0 has {x0.shape[0]} entries, embedding needs {2 * K.n_vertices}")
    return [Problem("frechet", obj, x0)]


def _run_once(objective: StratifiedObjective, x0: np.ndarray, config: ExperimentConfig) -> OptimizerTrace:
    if config.mode == "SGS":
        return sgs_run(objective, x0, config.sgs, record_timing=config.record_timing)
    sgs = config.sgs
    params = BaselineConfig(eps=sgs.eps, eta=sgs.eta, beta=sgs.beta, gamma=sgs.gamma,
                            max_iters=sgs.max_iters, samples=config.gs_samples, seed=sgs.seed)
    return baseline_run(objective, x0, config.mode, params, record_timing=config.record_timing)


def run_problem(problem: Problem, config: ExperimentConfig) -> OptimizerTrace:
    """Run the configured optimizer on one problem, keeping the best run over its starts."""
    logger.info(f"running {config.mode} on {problem.name}")
    best = None
    for i, x0 in enumerate([problem.x0] + problem.restarts):
        trace = _run_once(problem.objective, x0, config)
        if problem.restarts:
            logger.info(f"{problem.name} start {i}: {trace.reason}, f={trace.final_f:.6g}")
        if best is None or trace.final_f < best.final_f:
            best = trace
    return best
