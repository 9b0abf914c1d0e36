"""
@file stratgrad/base_objective.py

Abstract base class defining the stratified objective interface consumed by
the optimizers.
"""

import logging
from abc import ABC, abstractmethod
from typing import List, Optional

import numpy as np

from stratgrad.topology.strata import StratumSample

logger = logging.getLogger(__name__)


class StratifiedObjective(ABC):
    """
    StratifiedObjective: contract for every objective plugin.

    Subclasses must implement:
    - value(x): objective value
    - gradient(x): gradient on the differentiability set
    - sample_strata(x, eps): points (with gradients) in strata near x
    - is_differentiable(x): membership in the differentiability set

    ``approx_factor`` is the constant a >= 1 of the strata oracle: every cell
    within eps/a of x is represented among the samples, and samples lie
    within eps of x. ``lipschitz_bound`` is the common Lipschitz constant of
    the per-stratum gradients, when known.
    """

    approx_factor: float = 1.0
    lipschitz_bound: Optional[float] = None

    @abstractmethod
    def value(self, x: np.ndarray) -> float:
        pass

    @abstractmethod
    def gradient(self, x: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def sample_strata(self, x: np.ndarray, eps: float) -> List[StratumSample]:
        """
        Sample one point per nearby stratum, gradients filled in.

        Args:
            x: Query point.
            eps: Exploration radius.

        Returns:
            StratumSamples for the strata near x other than x's own.
        """
        pass

    @abstractmethod
    def is_differentiable(self, x: np.ndarray) -> bool:
        pass


class Regularized(StratifiedObjective):
    """Adds lam * ||x||^2 to a wrapped objective (keeps sublevel sets bounded)."""

    def __init__(self, inner: StratifiedObjective, lam: float):
        self.inner = inner
        self.lam = lam
        self.approx_factor = inner.approx_factor
        if inner.lipschitz_bound is not None:
            self.lipschitz_bound = inner.lipschitz_bound + 2.0 * lam

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.inner.value(x) + self.lam * float(x @ x)

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return self.inner.gradient(x) + 2.0 * self.lam * x

    def sample_strata(self, x, eps):
        return [StratumSample(key=s.key, point=s.point, dist_estimate=s.dist_estimate,
                              gradient=s.gradient + 2.0 * self.lam * s.point)
                for s in self.inner.sample_strata(x, eps)]

    def is_differentiable(self, x):
        return self.inner.is_differentiable(x)

    def __getattr__(self, name):
        # forward objective-specific helpers (barcode, K, ...)
        inner = self.__dict__.get("inner")
        if inner is None:
            raise AttributeError(name)
        return getattr(inner, name)
