"""
@file stratgrad/optim/baselines.py

Baseline optimizers sharing the SGS trace format: gradient descent with a
constant step (GD), with a decaying step eps/(1+k) (GDwD), and classical
gradient sampling (GS) with uniform samples in B(x_k, eps).
"""

import logging
import time
from typing import Literal

import numpy as np

from stratgrad import settings
from stratgrad.base_objective import StratifiedObjective
from stratgrad.models import BaselineConfig, IterationRecord, OptimizerTrace
from stratgrad.optim.min_norm import min_norm_point
from stratgrad.optim.sgs import make_differentiable, uniform_ball

logger = logging.getLogger(__name__)

Mode = Literal["GD", "GDwD", "GS"]


def _gs_direction(obj: StratifiedObjective, x: np.ndarray, eps: float, m: int, rng: np.random.Generator):
    G = [obj.gradient(x)]
    for _ in range(m):
        p = uniform_ball(rng, x, eps)
        if obj.is_differentiable(p):
            G.append(obj.gradient(p))
    return min_norm_point(G), len(G) - 1


def _backtrack(obj: StratifiedObjective, x: np.ndarray, f: float, g: np.ndarray, t: float,
               beta: float, gamma: float) -> float:
    g_sq = float(g @ g)
    for _ in range(settings.MAX_BACKTRACKS):
        if obj.value(x - t * g) < f - beta * t * g_sq:
            return t
        t *= gamma
    logger.warning("GS backtracking failed; taking a null step")
    return 0.0


def baseline_run(obj: StratifiedObjective, x0, mode: Mode, params: BaselineConfig,
                 record_timing: bool = True) -> OptimizerTrace:
    """
    Run one of the baseline optimizers.

    Args:
        obj: The objective.
        x0: Starting point.
        mode: "GD", "GDwD" or "GS".
        params: Step/radius, stopping threshold and budget.
        record_timing: Fill ``wall_ms``.

    Returns:
        An OptimizerTrace in the same format as ``sgs_run``.
    """
    rng = np.random.default_rng(params.seed)
    x = np.asarray(x0, dtype=float).copy()
    m = params.samples if params.samples is not None else x.shape[0] + 1
    trace = OptimizerTrace()
    f = obj.value(x)
    logger.info(f"{mode} start: f={f:.6g}")
    for k in range(params.max_iters + 1):
        started = time.perf_counter()
        strata = 0
        if mode == "GS":
            g, strata = _gs_direction(obj, x, params.eps, m, rng)
        else:
            g = obj.gradient(x)
        g_norm = float(np.linalg.norm(g))
        done = g_norm <= params.eta or k == params.max_iters

        radius = params.eps / (1.0 + k) if mode == "GDwD" else params.eps
        t = 0.0
        if not done:
            if mode != "GS":
                t = radius
            else:
                t = _backtrack(obj, x, f, g, params.eps / g_norm, params.beta, params.gamma)

        wall_ms = (time.perf_counter() - started) * 1000.0 if record_timing else 0.0
        trace.records.append(IterationRecord(k=k, x=x.tolist(), f=f, g_norm=g_norm, eps_k=radius,
                                             t_k=t, strata=strata, wall_ms=wall_ms))
        if done:
            trace.reason = "GradientBelowEta" if g_norm <= params.eta else "MaxIters"
            break
        if t > 0:
            x_next = x - t * g
            if mode == "GS":
                x_next = make_differentiable(obj, x_next, x, t, g, rng, beta=params.beta, f_k=f)
            x = x_next
            f = obj.value(x)
    logger.info(f"{mode} stop at k={trace.records[-1].k}: {trace.reason}")
    return trace
