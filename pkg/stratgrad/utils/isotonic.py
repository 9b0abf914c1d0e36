"""
stratgrad/utils/isotonic.py

Isotonic least-squares regression, used for exact distances to permutation
cells.
"""

from typing import Optional

import numpy as np
from scipy import optimize


def isotonic_regression(y, weights: Optional[np.ndarray] = None, increasing: bool = True) -> np.ndarray:
    """
    Weighted least-squares projection of ``y`` onto monotone sequences.

    Args:
        y: 1-D sequence of reals.
        weights: Optional positive weights, one per entry.
        increasing: Fit a nondecreasing sequence (else nonincreasing).

    Returns:
        The fitted array, same length as ``y``.
    """
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        return np.zeros(0)
    return optimize.isotonic_regression(y, weights=weights, increasing=increasing).x
