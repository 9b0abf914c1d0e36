"""
stratgrad/objectives/toy.py

Two-strata toy objective f(z) = s * log(1 + |z1|) + z2^2 with an exact oracle.
"""

import math
from typing import List

import numpy as np

from stratgrad.base_objective import StratifiedObjective
from stratgrad.errors import NotDifferentiable
from stratgrad.topology.strata import StratumSample


class CreaseObjective(StratifiedObjective):
    """
    Smooth on {z1 < 0} and {z1 > 0}, with a crease along z1 = 0.

    The oracle is exact (a = 1): when the other half-plane is within eps, it
    returns the nearest boundary point together with the gradient of that
    half-plane's smooth extension.
    """

    approx_factor = 1.0

    def __init__(self, scale: float = 10.0):
        self.scale = scale
        self.lipschitz_bound = max(scale, 2.0)

    def value(self, x):
        z1, z2 = float(x[0]), float(x[1])
        return self.scale * math.log1p(abs(z1)) + z2 * z2

    def _side_gradient(self, z1: float, z2: float, side: float) -> np.ndarray:
        return np.array([side * self.scale / (1.0 + abs(z1)), 2.0 * z2])

    def gradient(self, x):
        z1, z2 = float(x[0]), float(x[1])
        if z1 == 0.0:
            raise NotDifferentiable("crease at z1 = 0")
        return self._side_gradient(z1, z2, math.copysign(1.0, z1))

    def sample_strata(self, x, eps) -> List[StratumSample]:
        z1, z2 = float(x[0]), float(x[1])
        if abs(z1) > eps:
            return []
        other = -math.copysign(1.0, z1)
        point = np.array([0.0, z2])
        return [StratumSample(key="z1<0" if other < 0 else "z1>0", point=point,
                              dist_estimate=abs(z1), gradient=self._side_gradient(0.0, z2, other))]

    def is_differentiable(self, x):
        return float(x[0]) != 0.0
