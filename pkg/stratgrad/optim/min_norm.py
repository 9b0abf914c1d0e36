"""
@file stratgrad/optim/min_norm.py

Wolfe's algorithm for the minimum-norm point of the convex hull of a
finite set of vectors.
"""

import logging
from typing import Sequence

import numpy as np

from stratgrad import settings

logger = logging.getLogger(__name__)


def _affine_minimizer(Q: np.ndarray) -> np.ndarray:
    """Weights mu (summing to 1, any sign) minimizing ||mu @ Q||."""
    k = Q.shape[0]
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = Q @ Q.T
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return sol[:k]


def min_norm_point(G: Sequence[np.ndarray], tol: float = settings.MIN_NORM_TOL,
                   max_iters: int = settings.MIN_NORM_MAX_ITERS) -> np.ndarray:
    """
    Project the origin onto co(G).

    Args:
        G: Nonempty list of equal-length vectors.
        tol: Optimality-gap tolerance, relative to the largest squared norm in G.
        max_iters: Guard on major cycles.

    Returns:
        The minimum-norm element of the convex hull.
    """
    P = np.atleast_2d(np.asarray(G, dtype=float))
    if P.shape[0] == 1:
        return P[0].copy()
    sq = np.einsum("ij,ij->i", P, P)
    scale = max(1.0, float(sq.max()))

    S = [int(np.argmin(sq))]
    lam = np.array([1.0])
    x = P[S[0]].copy()
    for _ in range(max_iters):
        dots = P @ x
        j = int(np.argmin(dots))
        if x @ x - dots[j] <= tol * scale or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            mu = _affine_minimizer(P[S])
            if np.all(mu > 0):
                lam = mu
                break
            neg = mu <= 0
            theta = min(1.0, float(np.min(lam[neg] / (lam[neg] - mu[neg]))))
            lam = lam + theta * (mu - lam)
            keep = lam > 1e-15
            if not keep.any():
                keep[int(np.argmax(lam))] = True
            S = [s for s, kept in zip(S, keep) if kept]
            lam = lam[keep] / lam[keep].sum()
        x = lam @ P[S]
    else:
        logger.warning(f"min-norm solver hit {max_iters} major cycles")
    return x
