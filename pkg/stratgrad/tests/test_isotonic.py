import numpy as np
import pytest

from stratgrad.utils.isotonic import isotonic_regression


def test_sorted_input_is_unchanged():
    y = np.array([0.0, 0.2, 0.2, 1.5])
    assert np.array_equal(isotonic_regression(y), y)


def test_violators_are_pooled():
    assert isotonic_regression([1.0, 3.0, 2.0]) == pytest.approx([1.0, 2.5, 2.5])
    assert isotonic_regression([3.0, 2.0, 1.0]) == pytest.approx([2.0, 2.0, 2.0])


def test_weighted_pool_uses_weighted_mean():
    fit = isotonic_regression([1.0, 3.0, 2.0], weights=np.array([1.0, 1.0, 2.0]))
    assert fit == pytest.approx([1.0, 7 / 3, 7 / 3])


def test_decreasing_fit():
    assert isotonic_regression([1.0, 3.0, 2.0], increasing=False) == pytest.approx([2.0, 2.0, 2.0])


def test_empty_input():
    assert isotonic_regression([]).shape == (0,)


def test_fit_is_the_projection(rng):
    """No other nondecreasing sequence on a random grid comes closer."""
    for _ in range(50):
        y = rng.normal(size=6)
        fit = isotonic_regression(y)
        assert np.all(np.diff(fit) >= -1e-12)
        best = np.sum((y - fit) ** 2)
        for _ in range(20):
            other = np.sort(rng.normal(size=6))
            assert best <= np.sum((y - other) ** 2) + 1e-12
