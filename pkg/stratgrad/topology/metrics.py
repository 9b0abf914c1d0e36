"""
@file stratgrad/topology/metrics.py

Diagram distances, total persistence, and the registration and Frechet
losses with their gradients with respect to the filter.

Gradients are assembled by the chain rule through the optimal matching:
d(cost)/d(birth) lands on ``birth_vertex`` and d(cost)/d(death) on
``death_vertex`` of each interval of the filter's own diagram.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from stratgrad.errors import InfiniteInterval
from stratgrad.models import Barcode
from stratgrad.topology.complex import SimplicialComplex, check_filter
from stratgrad.topology.persistence import persistence_extended

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass
class PartialMatching:
    """
    Optimal partial matching between two diagrams.

    Attributes:
        matched: Pairs (id in D, id in D').
        unmatched_left: Ids of D charged to the diagonal.
        unmatched_right: Ids of D' charged to the diagonal.
        cost: Total cost, i.e. W_q^q.
    """
    matched: List[Tuple[int, int]] = field(default_factory=list)
    unmatched_left: List[int] = field(default_factory=list)
    unmatched_right: List[int] = field(default_factory=list)
    cost: float = 0.0


@dataclass
class LossValueAndGradient:
    value: float
    gradient: np.ndarray


def _finite_points(B: Barcode) -> np.ndarray:
    pts = []
    for iv in B.intervals:
        if iv.is_essential:
            raise InfiniteInterval(f"essential interval born at {iv.birth} in degree {iv.degree}")
        pts.append((iv.birth, iv.death))
    return np.array(pts, dtype=float).reshape(-1, 2)


def _diagonal_cost(points: np.ndarray, q: float) -> np.ndarray:
    return (np.abs(points[:, 1] - points[:, 0]) / SQRT2) ** q


def wq_distance(D: Barcode, D_prime: Barcode, q: float = 2.0) -> Tuple[float, PartialMatching]:
    """
    q-th Wasserstein distance between two finite diagrams.

    Solved exactly as an assignment problem on the augmented
    (|D|+|D'|) x (|D'|+|D|) matrix: rows are points of D then diagonal slots
    for D', columns are points of D' then diagonal slots for D.

    Args:
        D: First diagram.
        D_prime: Second diagram.
        q: Exponent, q >= 1.

    Returns:
        (W_q, optimal PartialMatching).

    Raises:
        InfiniteInterval: if either diagram holds an essential interval.
    """
    A, B = _finite_points(D), _finite_points(D_prime)
    m, n = len(A), len(B)
    if m == 0 and n == 0:
        return 0.0, PartialMatching()

    diag_a, diag_b = _diagonal_cost(A, q), _diagonal_cost(B, q)
    cross = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2) ** q if m and n else np.zeros((m, n))
    forbidden = cross.sum() + diag_a.sum() + diag_b.sum() + 1.0

    C = np.zeros((m + n, n + m))
    C[:m, :n] = cross
    C[:m, n:] = forbidden
    C[m:, :n] = forbidden
    if m:
        C[np.arange(m), n + np.arange(m)] = diag_a
    if n:
        C[m + np.arange(n), np.arange(n)] = diag_b

    rows, cols = optimize.linear_sum_assignment(C)
    matching = PartialMatching()
    for r, c in zip(rows, cols):
        if r < m and c < n:
            matching.matched.append((int(r), int(c)))
        elif r < m:
            matching.unmatched_left.append(int(r))
        elif c < n:
            matching.unmatched_right.append(int(c))
    matching.cost = float(C[rows, cols].sum())
    return matching.cost ** (1.0 / q), matching


def _cost_gradient(D: Barcode, D_prime: Barcode, matching: PartialMatching, q: float, n_vertices: int) -> np.ndarray:
    """Gradient of W_q^q with respect to the filter that produced D."""
    grad = np.zeros(n_vertices)
    A, B = _finite_points(D), _finite_points(D_prime)
    for i, j in matching.matched:
        diff = A[i] - B[j]
        r = float(np.linalg.norm(diff))
        if r == 0.0:
            continue
        coef = q * r ** (q - 2) * diff
        iv = D.intervals[i]
        grad[iv.birth_vertex] += coef[0]
        grad[iv.death_vertex] += coef[1]
    for i in matching.unmatched_left:
        iv = D.intervals[i]
        dist = (A[i, 1] - A[i, 0]) / SQRT2
        coef = q * dist ** (q - 1) / SQRT2
        grad[iv.death_vertex] += coef
        grad[iv.birth_vertex] -= coef
    return grad


def total_persistence(B: Barcode) -> float:
    """Sum of |death - birth| over the barcode (no 1/sqrt(2) factor)."""
    if not len(B):
        return 0.0
    pts = _finite_points(B)
    return float(np.abs(pts[:, 1] - pts[:, 0]).sum())


def total_persistence_loss(x, K: SimplicialComplex, barcode: Optional[Barcode] = None,
                           max_degree: int = 0) -> LossValueAndGradient:
    """Total extended persistence and its within-stratum gradient."""
    x = check_filter(K, x)
    B = barcode if barcode is not None else persistence_extended(K, x, max_degree)
    grad = np.zeros(K.n_vertices)
    for iv in B.intervals:
        grad[iv.death_vertex] += 1.0
        grad[iv.birth_vertex] -= 1.0
    return LossValueAndGradient(value=total_persistence(B), gradient=grad)


def registration_loss(x, K_prime: SimplicialComplex, target: Barcode, q: float = 2.0,
                      barcode: Optional[Barcode] = None, max_degree: int = 0) -> LossValueAndGradient:
    """
    W_q(PH(x, K'), target) and its gradient in x.

    Args:
        x: Template filter.
        K_prime: Template complex.
        target: Finite target diagram.
        q: Distance exponent.
        barcode: Precomputed PH(x, K') (e.g. from a memoized pairing).
        max_degree: Highest homology degree of the extended barcode.
    """
    x = check_filter(K_prime, x)
    D = barcode if barcode is not None else persistence_extended(K_prime, x, max_degree)
    value, matching = wq_distance(D, target, q)
    if matching.cost <= 0.0:
        return LossValueAndGradient(value=0.0, gradient=np.zeros(K_prime.n_vertices))
    outer = matching.cost ** (1.0 / q - 1.0) / q
    grad = outer * _cost_gradient(D, target, matching, q, K_prime.n_vertices)
    return LossValueAndGradient(value=value, gradient=grad)


def frechet_loss(x, K: SimplicialComplex, targets: Sequence[Barcode],
                 barcode: Optional[Barcode] = None, max_degree: int = 0) -> LossValueAndGradient:
    """Sum of squared W_2 distances from PH(x, K) to each target."""
    x = check_filter(K, x)
    D = barcode if barcode is not None else persistence_extended(K, x, max_degree)
    value, grad = 0.0, np.zeros(K.n_vertices)
    for target in targets:
        _, matching = wq_distance(D, target, 2.0)
        value += matching.cost
        grad += _cost_gradient(D, target, matching, 2.0, K.n_vertices)
    return LossValueAndGradient(value=value, gradient=grad)
