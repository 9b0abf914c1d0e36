import numpy as np
import pytest

from stratgrad.importers.generators import cycle_complex, path_complex

PATH5_X0 = [0.4, 0.72, 0.0, 0.3, 0.14]


@pytest.fixture
def path5():
    return path_complex(5)


@pytest.fixture
def x_path5():
    return np.array(PATH5_X0)


@pytest.fixture
def cycle4():
    return cycle_complex(4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def points(barcode):
    """Sorted (birth, death) pairs, rounded for comparisons."""
    return sorted((round(iv.birth, 12), None if iv.death is None else round(iv.death, 12))
                  for iv in barcode.intervals)
