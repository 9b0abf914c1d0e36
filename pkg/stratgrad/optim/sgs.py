"""
@file stratgrad/optim/sgs.py

Stratified gradient sampling: the approximate Goldstein gradient, the
update step with its controlling constant, the known-Lipschitz variants,
the perturbation back into the differentiability set, and the main loop.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from stratgrad import settings
from stratgrad.base_objective import Regularized, StratifiedObjective
from stratgrad.errors import ConfigError, MaxInnerIterations, MaxRounds, NotDifferentiable, OracleContractError
from stratgrad.models import IterationRecord, OptimizerTrace, SgsConfig
from stratgrad.optim.min_norm import min_norm_point

logger = logging.getLogger(__name__)


@dataclass
class StepResult:
    """
    Outcome of one update step.

    Attributes:
        t: Step length along -g (0 when x is (eps_k, eta)-stationary).
        g: Descent direction.
        C: Controlling constant after the step (None for the Lipschitz variants).
        eps: Radius the step settled on.
        strata: Number of sampled strata behind g.
        inner_iterations: Number of radius reductions performed.
    """
    t: float
    g: np.ndarray
    C: Optional[float]
    eps: float
    strata: int
    inner_iterations: int = 0


def _gradient_set(obj: StratifiedObjective, x: np.ndarray, eps: float):
    if not obj.is_differentiable(x):
        raise NotDifferentiable(f"objective not differentiable at {x}")
    samples = obj.sample_strata(x, eps)
    G = [obj.gradient(x)] + [s.gradient for s in samples]
    return G, samples


def approx_gradient(obj: StratifiedObjective, x, eps: float) -> Tuple[np.ndarray, int]:
    """
    Min-norm element of the gradients at x and at the sampled nearby strata.

    Returns:
        (g, number of sampled strata).
    """
    x = np.asarray(x, dtype=float)
    G, samples = _gradient_set(obj, x, eps)
    return min_norm_point(G), len(samples)


class _RadiusRestart:
    """Checks that shrinking the radius only ever drops sampled strata."""

    def __init__(self, obj: StratifiedObjective, x: np.ndarray):
        self.obj = obj
        self.x = x
        self.first_keys = None

    def __call__(self, eps: float) -> Tuple[np.ndarray, int]:
        G, samples = _gradient_set(self.obj, self.x, eps)
        keys = {s.key for s in samples}
        if self.first_keys is None:
            self.first_keys = keys
        elif not keys <= self.first_keys:
            raise OracleContractError("strata sampled at a smaller radius are not a subset of the first sample")
        return min_norm_point(G), len(samples)


def update_step(obj: StratifiedObjective, x_k, eps: float, eta: float, C_k: float,
                beta: float, gamma: float, max_inner: int = settings.MAX_INNER_ITERATIONS,
                f_k: Optional[float] = None) -> StepResult:
    """
    Find a step satisfying both acceptance tests, or detect stationarity.

    On return either ||g|| <= eta and t = 0, or t = eps_k / (a ||g||) with
    f(x_k - t g) < f(x_k) - beta t ||g||^2 and eps_k < C ||g||. Both tests
    are re-evaluated after every change to C or eps_k.

    Raises:
        MaxInnerIterations: if the loop does not settle.
    """
    x_k = np.asarray(x_k, dtype=float)
    a = obj.approx_factor
    f_k = obj.value(x_k) if f_k is None else f_k
    oracle = _RadiusRestart(obj, x_k)
    eps_k, C = eps, C_k
    for inner in range(max_inner):
        g, count = oracle(eps_k)
        g_norm = float(np.linalg.norm(g))
        if g_norm <= eta:
            return StepResult(t=0.0, g=g, C=C, eps=eps_k, strata=count, inner_iterations=inner)
        t = eps_k / (a * g_norm)
        descent = obj.value(x_k - t * g) < f_k - beta * t * g_norm ** 2
        if not descent:
            while eps_k <= C * g_norm:
                C *= gamma
            logger.debug(f"descent failed at eps_k={eps_k:.3g}; C={C:.3g}")
        if descent and eps_k < C * g_norm:
            return StepResult(t=t, g=g, C=C, eps=eps_k, strata=count, inner_iterations=inner)
        eps_k *= gamma
    raise MaxInnerIterations(f"update step did not settle in {max_inner} iterations")


def simple_update_step(obj: StratifiedObjective, x_k, eps: float, eta: float, beta: float, gamma: float,
                       lipschitz: Optional[float] = None, quick: bool = False,
                       max_inner: int = settings.MAX_INNER_ITERATIONS) -> StepResult:
    """
    Update step for objectives with a known gradient Lipschitz constant L.

    Shrinks eps_k by gamma until eps_k <= (1 - beta) ||g|| / (2L), then takes
    t = eps_k / (a ||g||). With ``quick`` the radius is set to that bound in
    one shot instead. L = 0 means the bound never binds.
    """
    x_k = np.asarray(x_k, dtype=float)
    L = obj.lipschitz_bound if lipschitz is None else lipschitz
    if L is None:
        raise ConfigError("simple update step needs a Lipschitz bound")
    a = obj.approx_factor
    oracle = _RadiusRestart(obj, x_k)
    eps_k = eps
    inner = 0
    while True:
        g, count = oracle(eps_k)
        g_norm = float(np.linalg.norm(g))
        if g_norm <= eta:
            return StepResult(t=0.0, g=g, C=None, eps=eps_k, strata=count, inner_iterations=inner)
        bound = np.inf if L == 0 else (1.0 - beta) * g_norm / (2.0 * L)
        if eps_k <= bound:
            break
        if quick and inner == 0:
            eps_k = bound
        else:
            eps_k *= gamma
        inner += 1
        if inner >= max_inner:
            raise MaxInnerIterations(f"simple update step did not settle in {max_inner} iterations")
    return StepResult(t=eps_k / (a * g_norm), g=g, C=None, eps=eps_k, strata=count, inner_iterations=inner)


def uniform_ball(rng: np.random.Generator, center: np.ndarray, radius: float) -> np.ndarray:
    """Uniform sample from the Euclidean ball B(center, radius)."""
    n = center.shape[0]
    direction = rng.standard_normal(n)
    direction /= np.linalg.norm(direction)
    return center + radius * rng.random() ** (1.0 / n) * direction


def make_differentiable(obj: StratifiedObjective, x_next, x_k, t_k: float, g_k, rng: np.random.Generator,
                        beta: float = 0.5, max_rounds: int = settings.MAX_DIFFERENTIABLE_ROUNDS,
                        f_k: Optional[float] = None) -> np.ndarray:
    """
    Replace a candidate by a differentiable point that still descends.

    Samples uniformly in B(x_k - t_k g_k, r), r starting at t_k ||g_k|| and
    halving each round, until the point is differentiable and
    f < f(x_k) - beta t_k ||g_k||^2.

    Raises:
        MaxRounds: after ``max_rounds`` unsuccessful rounds.
    """
    x_k = np.asarray(x_k, dtype=float)
    g_k = np.asarray(g_k, dtype=float)
    g_norm = float(np.linalg.norm(g_k))
    f_k = obj.value(x_k) if f_k is None else f_k
    threshold = f_k - beta * t_k * g_norm ** 2
    center = x_k - t_k * g_k
    r = t_k * g_norm
    x = np.asarray(x_next, dtype=float)
    for _ in range(max_rounds):
        if obj.is_differentiable(x) and obj.value(x) < threshold:
            return x
        x = uniform_ball(rng, center, r)
        r /= 2.0
    raise MaxRounds(f"no differentiable descent point found in {max_rounds} rounds")


def ensure_differentiable(obj: StratifiedObjective, x0, radius: float, rng: np.random.Generator,
                          max_rounds: int = settings.MAX_DIFFERENTIABLE_ROUNDS) -> np.ndarray:
    """Perturb a starting point into the differentiability set."""
    x0 = np.asarray(x0, dtype=float)
    x = x0
    for _ in range(max_rounds):
        if obj.is_differentiable(x):
            return x
        x = uniform_ball(rng, x0, radius)
        radius /= 2.0
    raise MaxRounds(f"starting point could not be made differentiable in {max_rounds} rounds")


def sgs_run(obj: StratifiedObjective, x0, config: SgsConfig, record_timing: bool = True) -> OptimizerTrace:
    """
    Run stratified gradient sampling from x0.

    Args:
        obj: The objective.
        x0: Starting point; perturbed first if not differentiable.
        config: Run parameters.
        record_timing: Fill ``wall_ms``; disable for byte-identical traces.

    Returns:
        The trace; ``reason`` tells whether ||g|| <= eta was reached.
    """
    if config.regularization > 0:
        obj = Regularized(obj, config.regularization)
    rng = np.random.default_rng(config.seed)
    x = np.asarray(x0, dtype=float).copy()
    if not obj.is_differentiable(x):
        logger.warning("starting point not differentiable; perturbing")
        x = ensure_differentiable(obj, x, config.eps, rng)

    C = config.c0
    f = obj.value(x)
    trace = OptimizerTrace()
    logger.info(f"SGS ({config.variant}) start: f={f:.6g}, eps={config.eps}, eta={config.eta}")
    for k in range(config.max_iters + 1):
        started = time.perf_counter()
        if k == config.max_iters:
            g, count = approx_gradient(obj, x, config.eps)
            step = StepResult(t=0.0, g=g, C=C, eps=config.eps, strata=count)
        elif config.variant == "full":
            step = update_step(obj, x, config.eps, config.eta, C, config.beta, config.gamma, f_k=f)
        else:
            step = simple_update_step(obj, x, config.eps, config.eta, config.beta, config.gamma,
                                      lipschitz=config.lipschitz, quick=config.variant == "quick")
        g_norm = float(np.linalg.norm(step.g))
        if step.t > 0:
            x_next = make_differentiable(obj, x - step.t * step.g, x, step.t, step.g, rng, beta=config.beta, f_k=f)
        wall_ms = (time.perf_counter() - started) * 1000.0 if record_timing else 0.0
        trace.records.append(IterationRecord(
            k=k, x=x.tolist(), f=f, g_norm=g_norm, eps_k=step.eps, t_k=step.t,
            C_k=C if config.variant == "full" else None, strata=step.strata, wall_ms=wall_ms))
        if g_norm <= config.eta:
            trace.reason = "GradientBelowEta"
            break
        if step.t == 0.0:
            trace.reason = "MaxIters"
            break
        x = x_next
        f = obj.value(x)
        if step.C is not None:
            C = step.C
    logger.info(f"SGS stop after {trace.iterations} steps: {trace.reason}, f={trace.final_f:.6g}")
    return trace
