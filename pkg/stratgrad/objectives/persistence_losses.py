"""
@file stratgrad/objectives/persistence_losses.py

Persistence-based objectives over a fixed complex: total persistence,
registration to a target diagram, and the Frechet loss against a family of
diagrams, alone or jointly over the projections of a planar embedding. All
share the mirror-point strata oracle (a = 2) and a memoized reduction
pairing per vertex preorder.
"""

import logging
from abc import abstractmethod
from typing import List, Literal, Optional, Sequence

import numpy as np

from stratgrad.base_objective import StratifiedObjective
from stratgrad.errors import ConfigError, FilterShapeError
from stratgrad.models import Barcode
from stratgrad.topology.complex import SimplicialComplex, check_filter
from stratgrad.topology.metrics import (
    LossValueAndGradient,
    frechet_loss,
    registration_loss,
    total_persistence_loss,
)
from stratgrad.topology.persistence import barcode_from_pairing
from stratgrad.topology.strata import PairingCache, StratumSample, sample_nearby_strata

logger = logging.getLogger(__name__)


class PersistenceObjective(StratifiedObjective):
    """
    Base class for losses V(PH(x)) of the extended barcode of x on K.

    Subclasses implement ``loss(x, barcode)``. Evaluations are cached for the
    last point, and the strata sampled for a point are kept so that a second
    query at the same point with a smaller radius is answered by filtering.
    """

    approx_factor = 2.0

    def __init__(self, K: SimplicialComplex, max_degree: int = 0, cap: Optional[int] = None,
                 search: Literal["best-first", "dfs"] = "best-first", cache_size: Optional[int] = None):
        self.K = K
        self.max_degree = max_degree
        self.cap = cap
        self.search = search
        self.cache = PairingCache(K, cache_size)
        self._last_point: Optional[bytes] = None
        self._last_eval: Optional[LossValueAndGradient] = None
        self._restart = None

    def barcode(self, x) -> Barcode:
        x = check_filter(self.K, x)
        pairing = self.cache.get(x, extended=True)
        return barcode_from_pairing(pairing, x, self.max_degree)

    @abstractmethod
    def loss(self, x: np.ndarray, barcode: Barcode) -> LossValueAndGradient:
        pass

    def evaluate(self, x) -> LossValueAndGradient:
        x = check_filter(self.K, x)
        token = x.tobytes()
        if token != self._last_point:
            self._last_eval = self.loss(x, self.barcode(x))
            self._last_point = token
        return self._last_eval

    def value(self, x):
        return self.evaluate(x).value

    def gradient(self, x):
        return self.evaluate(x).gradient.copy()

    def is_differentiable(self, x):
        x = np.asarray(x, dtype=float)
        return len(np.unique(x)) == len(x)

    def sample_strata(self, x, eps) -> List[StratumSample]:
        x = check_filter(self.K, x)
        token = x.tobytes()
        if self._restart is not None and self._restart[0] == token and eps <= self._restart[1]:
            return [s for s in self._restart[2] if s.dist_estimate <= eps]
        samples = sample_nearby_strata(x, eps, cap=self.cap, method=self.search)
        for s in samples:
            s.gradient = self.evaluate(s.point).gradient.copy()
        self._restart = (token, eps, samples)
        logger.debug(f"sampled {len(samples)} strata within {eps}")
        return list(samples)


class TotalPersistenceObjective(PersistenceObjective):
    """Sum of bar lengths; gradients are constant on each stratum, hence L = 0."""

    lipschitz_bound = 0.0

    def loss(self, x, barcode):
        return total_persistence_loss(x, self.K, barcode=barcode, max_degree=self.max_degree)


class RegistrationObjective(PersistenceObjective):
    """W_q distance from the template's diagram to a fixed target diagram."""

    def __init__(self, K: SimplicialComplex, target: Barcode, q: float = 2.0, **kwargs):
        super().__init__(K, **kwargs)
        self.target = target.finite()
        self.q = q

    def loss(self, x, barcode):
        return registration_loss(x, self.K, self.target, self.q, barcode=barcode, max_degree=self.max_degree)


class FrechetObjective(PersistenceObjective):
    """Sum of squared W_2 distances to each target diagram."""

    def __init__(self, K: SimplicialComplex, targets: Sequence[Barcode], **kwargs):
        super().__init__(K, **kwargs)
        self.targets = [t.finite() for t in targets]

    def loss(self, x, barcode):
        return frechet_loss(x, self.K, self.targets, barcode=barcode, max_degree=self.max_degree)


class JointFrechetObjective(StratifiedObjective):
    """
    Frechet loss of one planar embedding, summed over projection directions.

    The point is the vertex coordinate matrix M (n_vertices x 2) flattened
    row-major. Direction e_j sees the filter M e_j and contributes
    sum_i W_2(PH(M e_j), D_ij)^2, so the gradient is sum_j grad_j outer e_j.

    Nearby strata are the union of each direction's mirror samples, lifted
    by moving M along e_j only; the lift preserves the distance, so the
    per-direction factor a = 2 carries over.
    """

    approx_factor = 2.0

    def __init__(self, K: SimplicialComplex, targets: Sequence[Sequence[Barcode]], angles: Sequence[float],
                 **kwargs):
        if len(targets) != len(angles):
            raise ConfigError(f"{len(angles)} directions but {len(targets)} target families")
        self.K = K
        self.directions = np.array([[np.cos(a), np.sin(a)] for a in angles])
        self.components = [FrechetObjective(K, family, **kwargs) for family in targets]

    def embedding(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (2 * self.K.n_vertices,):
            raise FilterShapeError(f"expected {2 * self.K.n_vertices} coordinates, got shape {x.shape}")
        return x.reshape(self.K.n_vertices, 2)

    def filters(self, x) -> List[np.ndarray]:
        M = self.embedding(x)
        return [M @ e for e in self.directions]

    def barcodes(self, x) -> List[Barcode]:
        return [c.barcode(h) for c, h in zip(self.components, self.filters(x))]

    def value(self, x):
        return float(sum(c.value(h) for c, h in zip(self.components, self.filters(x))))

    def _lifted_gradient(self, parts: List[np.ndarray]) -> np.ndarray:
        return sum(np.outer(g, e) for g, e in zip(parts, self.directions)).ravel()

    def gradient(self, x):
        return self._lifted_gradient([c.gradient(h) for c, h in zip(self.components, self.filters(x))])

    def is_differentiable(self, x):
        return all(c.is_differentiable(h) for c, h in zip(self.components, self.filters(x)))

    def sample_strata(self, x, eps) -> List[StratumSample]:
        M = self.embedding(x)
        samples = []
        for j, (component, e) in enumerate(zip(self.components, self.directions)):
            h = M @ e
            for s in component.sample_strata(h, eps):
                lifted = M + np.outer(s.point - h, e)
                parts = [s.gradient if k == j else c.evaluate(lifted @ d).gradient
                         for k, (c, d) in enumerate(zip(self.components, self.directions))]
                samples.append(StratumSample(key=(j, s.key), point=lifted.ravel(), dist_estimate=s.dist_estimate,
                                             gradient=self._lifted_gradient(parts)))
        logger.debug(f"sampled {len(samples)} strata over {len(self.components)} directions within {eps}")
        return samples
