import functools
import itertools

import numpy as np
import pytest

from stratgrad.optim.min_norm import min_norm_point


def brute_force_min_norm(P):
    """Smallest affine minimizer with nonnegative weights over every subset of generators."""
    best = None
    for size in range(1, len(P) + 1):
        for subset in itertools.combinations(range(len(P)), size):
            Q = P[list(subset)]
            k = len(subset)
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = Q @ Q.T
            kkt[:k, k] = kkt[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            mu = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            if np.all(mu >= -1e-12):
                value = float(np.linalg.norm(mu @ Q))
                best = value if best is None else min(best, value)
    return best


def test_singleton_is_returned():
    g = np.array([3.0, -4.0])
    out = min_norm_point([g])
    assert np.array_equal(out, g)
    assert out is not g


def test_two_orthogonal_generators():
    assert min_norm_point([np.array([1.0, 0.0]), np.array([0.0, 1.0])]) == pytest.approx([0.5, 0.5])


def test_opposite_generators_reach_origin():
    out = min_norm_point([np.array([1.0, 0.0]), np.array([-1.0, 0.0])])
    assert np.linalg.norm(out) <= 1e-12


def test_duplicates_and_collinear_points():
    P = [np.array([1.0, 1.0]), np.array([1.0, 1.0]), np.array([2.0, 2.0]), np.array([3.0, 3.0])]
    assert min_norm_point(P) == pytest.approx([1.0, 1.0])


def test_matches_subset_enumeration(rng):
    for _ in range(200):
        m = int(rng.integers(1, 6))
        d = int(rng.integers(1, 7))
        P = rng.uniform(-1.0, 1.0, size=(m, d))
        out = min_norm_point(list(P))
        assert abs(np.linalg.norm(out) - brute_force_min_norm(P)) <= 1e-9


GRID_STEPS = {2: 1000, 3: 1000, 4: 100, 5: 40}


@functools.lru_cache(maxsize=None)
def simplex_grid(m: int, steps: int) -> np.ndarray:
    """Every convex weight vector of length m with entries in multiples of 1/steps."""
    rows = []
    for bars in itertools.combinations(range(steps + m - 1), m - 1):
        edges = (-1,) + bars + (steps + m - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(m)])
    return np.array(rows, dtype=float) / steps


def test_no_grid_point_is_better(rng):
    """Dense search over convex weights for up to five generators in up to six dimensions."""
    for _ in range(100):
        m = int(rng.integers(2, 6))
        d = int(rng.integers(1, 7))
        P = rng.uniform(-1.0, 1.0, size=(m, d))
        steps = GRID_STEPS[m]
        grid_best = float(np.min(np.sum((simplex_grid(m, steps) @ P) ** 2, axis=1)))
        solver = float(np.sum(min_norm_point(list(P)) ** 2))
        assert solver <= grid_best + 1e-10
        # rounding the optimal weights onto the grid moves the point by at most m * max|P| / steps
        slack = (m * np.max(np.linalg.norm(P, axis=1)) / steps) ** 2
        assert grid_best - solver <= slack + 1e-9


def test_variational_inequality(rng):
    """The projection of the origin satisfies <x, p - x> >= 0 for every generator p."""
    for _ in range(100):
        m = int(rng.integers(2, 8))
        P = rng.normal(size=(m, 4))
        x = min_norm_point(list(P))
        assert np.min((P - x) @ x) >= -1e-8
