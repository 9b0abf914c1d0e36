"""
@file stratgrad/topology/strata.py

The permutation stratification of filter space.

A permutation ``perm`` names the closed cell S_perm of filters x with
x[perm[0]] <= x[perm[1]] <= ... . For a query with ascending coordinates s,
the mirror s^perm (s^perm[perm[i]] = s[i]) lies in S_perm and is within a
factor 2 of the projection onto it. Nearby cells are found by exploring the
Cayley graph of adjacent transpositions from the identity; every
non-identity permutation has a neighbor with one fewer inversion whose
mirror is no farther from the query, so pruning at distance > eps loses
nothing.
"""

import heapq
import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Hashable, List, Literal, Optional, Tuple

import numpy as np

from stratgrad import settings
from stratgrad.topology.complex import SimplicialComplex
from stratgrad.topology.persistence import Pairing, compute_pairing
from stratgrad.utils.isotonic import isotonic_regression

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StratumKey:
    perm: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")

    @classmethod
    def identity(cls, n: int) -> "StratumKey":
        return cls(tuple(range(n)))


@dataclass
class StratumSample:
    """
    One sampled stratum: its key, a point in it, and that point's gradient.

    ``key`` is a StratumKey for persistence objectives and any hashable label
    for other objectives.
    """
    key: Hashable
    point: np.ndarray
    dist_estimate: float
    gradient: Optional[np.ndarray] = field(default=None, repr=False)


def mirror(x, key: StratumKey) -> np.ndarray:
    """x^perm with x^perm[perm[i]] = x[i]; assumes x is ascending."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[np.asarray(key.perm)] = x
    return out


def exact_distance_to_cell(x, key: StratumKey) -> float:
    """Euclidean distance from x to S_perm via isotonic regression of x reordered by perm."""
    z = np.asarray(x, dtype=float)[np.asarray(key.perm)]
    return float(np.linalg.norm(z - isotonic_regression(z)))


def inversions(perm) -> set:
    """Pairs (i, j), i < j, with perm[i] > perm[j]."""
    n = len(perm)
    return {(i, j) for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]}


def transposition_delta(sorted_x: np.ndarray, perm, i: int) -> float:
    """
    Change of the squared mirror distance when perm[i] and perm[i+1] are swapped.

    Only the two coordinates at positions perm[i] and perm[i+1] change.
    """
    p, q = perm[i], perm[i + 1]
    a, b = sorted_x[i], sorted_x[i + 1]
    old = (sorted_x[p] - a) ** 2 + (sorted_x[q] - b) ** 2
    new = (sorted_x[p] - b) ** 2 + (sorted_x[q] - a) ** 2
    return new - old


def _explore(s: np.ndarray, eps: float, cap: Optional[int], method: str) -> List[Tuple[float, Tuple[int, ...]]]:
    n = len(s)
    eps_sq = eps * eps
    root = tuple(range(n))
    visited = {root}
    found: List[Tuple[float, Tuple[int, ...]]] = []

    def children(d_sq: float, perm: Tuple[int, ...]):
        for i in range(n - 1):
            child = list(perm)
            child[i], child[i + 1] = child[i + 1], child[i]
            child = tuple(child)
            if child in visited:
                continue
            visited.add(child)
            yield max(d_sq + transposition_delta(s, perm, i), 0.0), child

    if method == "dfs":
        stack = list(children(0.0, root))
        while stack:
            d_sq, perm = stack.pop()
            if d_sq > eps_sq:
                continue
            found.append((d_sq, perm))
            stack.extend(children(d_sq, perm))
        found.sort()
        return found[:cap] if cap is not None else found

    heap = list(children(0.0, root))
    heapq.heapify(heap)
    while heap:
        d_sq, perm = heapq.heappop(heap)
        if d_sq > eps_sq:
            break
        found.append((d_sq, perm))
        if cap is not None and len(found) >= cap:
            logger.debug(f"strata cap {cap} reached")
            break
        for item in children(d_sq, perm):
            heapq.heappush(heap, item)
    return found


def sample_nearby_strata(x, eps: float, cap: Optional[int] = None,
                         method: Literal["best-first", "dfs"] = "best-first") -> List[StratumSample]:
    """
    All non-identity mirrors of x within distance eps.

    Args:
        x: Query filter (any order; ties are sorted stably).
        eps: Exploration radius, > 0.
        cap: Keep only the ``cap`` closest mirrors.
        method: Best-first (Dijkstra-like) or depth-first traversal.

    Returns:
        StratumSamples ordered by distance; keys are expressed in the query's
        own vertex indexing.
    """
    x = np.asarray(x, dtype=float)
    sigma = np.argsort(x, kind="stable")
    s = x[sigma]
    samples = []
    for d_sq, perm in _explore(s, eps, cap, method):
        perm_arr = np.asarray(perm)
        sorted_mirror = np.empty_like(s)
        sorted_mirror[perm_arr] = s
        point = np.empty_like(x)
        point[sigma] = sorted_mirror
        key = StratumKey(tuple(int(v) for v in sigma[perm_arr]))
        samples.append(StratumSample(key=key, point=point, dist_estimate=float(np.sqrt(d_sq))))
    return samples


def preorder_key(x) -> Tuple[int, ...]:
    """Dense rank of each coordinate: equal for all filters inducing the same vertex preorder."""
    return tuple(int(r) for r in np.unique(np.asarray(x, dtype=float), return_inverse=True)[1])


class PairingCache:
    """
    Bounded LRU map from (extended flag, vertex preorder) to a reduction pairing.

    Lookups and inserts are serialized by a lock so barcodes of sampled
    mirrors can be evaluated from several threads.
    """

    def __init__(self, K: SimplicialComplex, maxsize: Optional[int] = None):
        self.K = K
        self.maxsize = settings.CACHE_SIZE if maxsize is None else maxsize
        self._data: "OrderedDict[tuple, Pairing]" = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._data)

    def get(self, x, extended: bool,
            compute: Callable[[SimplicialComplex, np.ndarray, bool], Pairing] = compute_pairing) -> Pairing:
        key = (extended, preorder_key(x))
        with self._lock:
            pairing = self._data.get(key)
            if pairing is not None:
                self._data.move_to_end(key)
                self.hits += 1
                return pairing
        pairing = compute(self.K, x, extended)
        with self._lock:
            self.misses += 1
            self._data[key] = pairing
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)
        return pairing
