import itertools
import math

import numpy as np
import pytest

from stratgrad.topology.strata import (
    StratumKey,
    exact_distance_to_cell,
    inversions,
    mirror,
    sample_nearby_strata,
    transposition_delta,
)


def mirror_distance(s, perm):
    return float(np.linalg.norm(mirror(s, StratumKey(perm)) - s))


def brute_force_mirrors(s, eps):
    """Every non-identity permutation whose mirror lies within eps of s."""
    n = len(s)
    return {perm for perm in itertools.permutations(range(n))
            if perm != tuple(range(n)) and mirror_distance(s, perm) <= eps}


def test_stratum_key_rejects_non_permutations():
    with pytest.raises(ValueError):
        StratumKey((0, 0, 1))
    assert StratumKey.identity(3).perm == (0, 1, 2)


def test_mirror_values():
    s = [0.0, 0.1, 0.5]
    assert list(mirror(s, StratumKey((0, 1, 2)))) == s
    assert list(mirror(s, StratumKey((1, 0, 2)))) == [0.1, 0.0, 0.5]
    assert list(mirror(s, StratumKey((2, 0, 1)))) == [0.1, 0.5, 0.0]


def test_exact_distance_and_factor_two():
    s = np.array([0.0, 1.0])
    key = StratumKey((1, 0))
    exact = exact_distance_to_cell(s, key)
    assert exact == pytest.approx(1 / math.sqrt(2), abs=1e-4)
    assert mirror_distance(s, (1, 0)) / exact == pytest.approx(2.0, abs=1e-12)


def test_mirror_within_factor_two_of_projection(rng):
    checked = 0
    while checked < 200:
        n = int(rng.integers(2, 9))
        s = np.sort(rng.random(n))
        perm = tuple(int(v) for v in rng.permutation(n))
        if perm == tuple(range(n)):
            continue
        exact = exact_distance_to_cell(s, StratumKey(perm))
        est = mirror_distance(s, perm)
        assert exact - 1e-12 <= est <= 2 * exact + 1e-12
        checked += 1


@pytest.mark.parametrize("method", ["best-first", "dfs"])
def test_exploration_is_complete(rng, method):
    for _ in range(50):
        n = int(rng.integers(2, 7))
        s = np.sort(rng.random(n))
        eps = float(rng.uniform(0.05, 0.6))
        found = {sample.key.perm for sample in sample_nearby_strata(s, eps, method=method)}
        assert found == brute_force_mirrors(s, eps)


def test_best_first_results_are_ordered(rng):
    s = np.sort(rng.random(6))
    samples = sample_nearby_strata(s, 0.5)
    dists = [sample.dist_estimate for sample in samples]
    assert dists == sorted(dists)
    for sample in samples:
        assert sample.dist_estimate == pytest.approx(mirror_distance(s, sample.key.perm), abs=1e-12)


def test_inversion_lemma_exhaustive(rng):
    """Each non-identity mirror has an adjacent mirror with one fewer inversion that is no farther."""
    for n in range(2, 6):
        for _ in range(5):
            s = np.sort(rng.random(n))
            for perm in itertools.permutations(range(n)):
                if perm == tuple(range(n)):
                    continue
                d = mirror_distance(s, perm)
                k = len(inversions(perm))
                closer = []
                for i in range(n - 1):
                    if perm[i] > perm[i + 1]:
                        child = list(perm)
                        child[i], child[i + 1] = child[i + 1], child[i]
                        assert len(inversions(child)) == k - 1
                        closer.append(mirror_distance(s, tuple(child)) <= d + 1e-12)
                assert any(closer), f"{perm} has no closer predecessor"


def test_inversion_inclusion_orders_mirror_distances(rng):
    """A permutation whose inversions contain another's has a mirror no closer to x."""
    for n in range(2, 6):
        perms = list(itertools.permutations(range(n)))
        inv = {p: inversions(p) for p in perms}
        for _ in range(3):
            s = np.sort(rng.random(n))
            dist = {p: mirror_distance(s, p) for p in perms}
            for p in perms:
                for q in perms:
                    if inv[p] <= inv[q]:
                        assert dist[p] <= dist[q] + 1e-12, f"{p} inside {q} but farther"


def test_transposition_delta_matches_recomputation(rng):
    for _ in range(200):
        n = int(rng.integers(2, 8))
        s = np.sort(rng.random(n))
        perm = tuple(int(v) for v in rng.permutation(n))
        i = int(rng.integers(0, n - 1))
        swapped = list(perm)
        swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
        expected = mirror_distance(s, tuple(swapped)) ** 2 - mirror_distance(s, perm) ** 2
        assert transposition_delta(s, perm, i) == pytest.approx(expected, abs=1e-12)


def test_wide_gaps_give_no_strata():
    assert sample_nearby_strata([0.0, 0.5, 1.0], 0.01) == []


def test_single_close_pair():
    samples = sample_nearby_strata([0.0, 0.005, 1.0], 0.01)
    assert len(samples) == 1
    assert samples[0].key.perm == (1, 0, 2)
    assert samples[0].dist_estimate == pytest.approx(0.005 * math.sqrt(2))
    assert list(samples[0].point) == [0.005, 0.0, 1.0]


def test_ties_give_zero_distance_mirrors():
    samples = sample_nearby_strata([0.3, 0.3, 0.9], 0.01)
    assert [s.key.perm for s in samples] == [(1, 0, 2)]
    assert samples[0].dist_estimate == 0.0


def test_keys_use_query_indexing():
    """A query that is not sorted reports keys in its own vertex order."""
    x = np.array([1.0, 0.0, 0.004])
    samples = sample_nearby_strata(x, 0.01)
    assert len(samples) == 1
    point = samples[0].point
    assert list(point) == [1.0, 0.004, 0.0]
    perm = samples[0].key.perm
    assert all(point[perm[i]] <= point[perm[i + 1]] for i in range(2)), "point lies in its keyed cell"


@pytest.mark.parametrize("method", ["best-first", "dfs"])
def test_cap_keeps_closest(rng, method):
    s = np.sort(rng.random(6))
    everything = sample_nearby_strata(s, 0.6)
    capped = sample_nearby_strata(s, 0.6, cap=5, method=method)
    assert len(capped) == min(5, len(everything))
    assert sorted(c.dist_estimate for c in capped) == pytest.approx(
        sorted(e.dist_estimate for e in everything)[:len(capped)])


def test_smaller_radius_is_subset(rng):
    s = np.sort(rng.random(6))
    wide = {sample.key for sample in sample_nearby_strata(s, 0.5)}
    narrow = {sample.key for sample in sample_nearby_strata(s, 0.2)}
    assert narrow <= wide
