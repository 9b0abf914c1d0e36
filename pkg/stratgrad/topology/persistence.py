"""
@file stratgrad/topology/persistence.py

Ordinary and extended persistence of lower-star filtrations by GF(2)
boundary-matrix reduction, with per-interval vertex attribution.

Extended persistence uses the cone construction: a cone vertex w enters
first, then K in ascending lower-star order, then the cones w*s in descending
upper-star order. Every class except the one of w dies, so all intervals are
finite. A reduction pair (i, j) is classified by which half its simplices
come from:

    K, K        ordinary   (max-vertex, max-vertex)
    K, cone     extended   (max-vertex, min-vertex)
    cone, cone  relative   (min-vertex, min-vertex)

The pairing depends on the filter only through its vertex preorder, which is
what makes barcode memoization per stratum possible.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from stratgrad.errors import DegreeTooLarge
from stratgrad.models import Barcode, Interval
from stratgrad.topology.complex import SimplicialComplex, check_filter, lower_star_order
from stratgrad.utils.union_find import UnionFind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairRecord:
    """Combinatorial description of one bar: which vertices carry its endpoints."""
    degree: int
    kind: str
    birth_vertex: int
    death_vertex: Optional[int]


@dataclass(frozen=True)
class Pairing:
    extended: bool
    records: Tuple[PairRecord, ...]


def _argmax_vertex(simplex, x) -> int:
    return max(simplex, key=lambda v: (x[v], v))


def _argmin_vertex(simplex, x) -> int:
    return min(simplex, key=lambda v: (x[v], v))


def reduce_boundary_matrix(boundaries: List[List[int]]) -> Dict[int, int]:
    """
    Standard column reduction over GF(2).

    Args:
        boundaries: For each column (in filtration order), the row positions
            of its boundary.

    Returns:
        Mapping low row -> column for every persistence pair.
    """
    pivots: Dict[int, int] = {}
    reduced: List[set] = []
    for j, bd in enumerate(boundaries):
        col = set(bd)
        while col:
            low = max(col)
            other = pivots.get(low)
            if other is None:
                pivots[low] = j
                break
            col ^= reduced[other]
        reduced.append(col)
    return pivots


def _ordinary_pairing(K: SimplicialComplex, x: np.ndarray) -> List[PairRecord]:
    order = lower_star_order(K, x, "sublevel").order
    pos = np.empty(len(K), dtype=int)
    pos[order] = np.arange(len(K))
    boundaries = [[int(pos[f]) for f in K.boundary(int(s))] for s in order]
    pivots = reduce_boundary_matrix(boundaries)

    records = []
    paired = set(pivots) | set(pivots.values())
    for low, col in pivots.items():
        sigma, tau = K.simplices[order[low]], K.simplices[order[col]]
        records.append(PairRecord(len(sigma) - 1, "ordinary", _argmax_vertex(sigma, x), _argmax_vertex(tau, x)))
    for p in range(len(K)):
        if p not in paired:
            sigma = K.simplices[order[p]]
            records.append(PairRecord(len(sigma) - 1, "essential", _argmax_vertex(sigma, x), None))
    return records


def _extended_pairing(K: SimplicialComplex, x: np.ndarray) -> List[PairRecord]:
    n = len(K)
    up = lower_star_order(K, x, "sublevel").order
    down = lower_star_order(K, x, "superlevel").order
    up_pos = np.empty(n, dtype=int)
    up_pos[up] = 1 + np.arange(n)
    cone_pos = np.empty(n, dtype=int)
    cone_pos[down] = 1 + n + np.arange(n)

    boundaries: List[List[int]] = [[]]
    for s in up:
        boundaries.append([int(up_pos[f]) for f in K.boundary(int(s))])
    for s in down:
        faces = K.boundary(int(s))
        cone_faces = [int(cone_pos[f]) for f in faces] if faces else [0]
        boundaries.append([int(up_pos[s])] + cone_faces)
    pivots = reduce_boundary_matrix(boundaries)

    def simplex_at(p: int):
        return K.simplices[up[p - 1]] if p <= n else K.simplices[down[p - 1 - n]]

    records = []
    for low, col in pivots.items():
        sigma, tau = simplex_at(low), simplex_at(col)
        if col <= n:
            records.append(PairRecord(len(sigma) - 1, "ordinary", _argmax_vertex(sigma, x), _argmax_vertex(tau, x)))
        elif low <= n:
            records.append(PairRecord(len(sigma) - 1, "extended", _argmax_vertex(sigma, x), _argmin_vertex(tau, x)))
        else:
            records.append(PairRecord(len(sigma), "relative", _argmin_vertex(sigma, x), _argmin_vertex(tau, x)))
    return records


def compute_pairing(K: SimplicialComplex, x, extended: bool) -> Pairing:
    """
    Reduce the (possibly coned) boundary matrix of the lower-star filtration.

    Args:
        K: The complex.
        x: Vertex filter.
        extended: Use the cone construction instead of the plain sublevel filtration.

    Returns:
        A Pairing whose records name the endpoint vertices of every bar.
    """
    x = check_filter(K, x)
    records = _extended_pairing(K, x) if extended else _ordinary_pairing(K, x)
    logger.debug(f"reduced {len(K)} simplices into {len(records)} pairs (extended={extended})")
    return Pairing(extended=extended, records=tuple(records))


def barcode_from_pairing(pairing: Pairing, x, max_degree: int) -> Barcode:
    """
    Evaluate a pairing at a filter: endpoints are coordinates of ``x``.

    Bars come out as (min, max) with ``flipped`` set when the natural
    orientation was reversed; zero-length bars are dropped.
    """
    x = np.asarray(x, dtype=float)
    intervals = []
    for rec in pairing.records:
        if rec.degree > max_degree:
            continue
        if rec.death_vertex is None:
            intervals.append(Interval(birth=float(x[rec.birth_vertex]), death=None, degree=rec.degree,
                                      kind="essential", birth_vertex=rec.birth_vertex))
            continue
        b, d = float(x[rec.birth_vertex]), float(x[rec.death_vertex])
        if b == d:
            continue
        if b < d:
            intervals.append(Interval(birth=b, death=d, degree=rec.degree, kind=rec.kind,
                                      birth_vertex=rec.birth_vertex, death_vertex=rec.death_vertex))
        else:
            intervals.append(Interval(birth=d, death=b, degree=rec.degree, kind=rec.kind,
                                      birth_vertex=rec.death_vertex, death_vertex=rec.birth_vertex,
                                      flipped=True))
    return Barcode(intervals=intervals)


def _check_degree(K: SimplicialComplex, max_degree: int) -> None:
    if max_degree < 0 or max_degree > K.dimension:
        raise DegreeTooLarge(f"max_degree={max_degree} but complex has dimension {K.dimension}")


def persistence_ordinary(K: SimplicialComplex, x, max_degree: int = 0) -> Barcode:
    """
    Barcode of the sublevel filtration up to ``max_degree``.

    Unbounded classes come back as essential intervals with ``death=None``.
    """
    _check_degree(K, max_degree)
    return barcode_from_pairing(compute_pairing(K, x, extended=False), x, max_degree)


def persistence_extended(K: SimplicialComplex, x, max_degree: int = 0) -> Barcode:
    """Extended barcode up to ``max_degree``; every interval is finite."""
    _check_degree(K, max_degree)
    return barcode_from_pairing(compute_pairing(K, x, extended=True), x, max_degree)


def barcode_gradient_support(B: Barcode) -> Dict[int, Tuple[int, Optional[int]]]:
    """Interval id -> (birth_vertex, death_vertex): the nonzero entries of d(b)/dx and d(d)/dx."""
    return {i: (iv.birth_vertex, iv.death_vertex) for i, iv in enumerate(B.intervals)}


def elder_rule_barcode(K: SimplicialComplex, x) -> Barcode:
    """
    Degree-0 sublevel barcode of the 1-skeleton by union-find and the elder rule.

    Independent of the matrix reduction; used as a cross-check.
    """
    x = check_filter(K, x)
    uf = UnionFind()
    intervals = []
    order = lower_star_order(K, x, "sublevel").order
    for s in order:
        simplex = K.simplices[s]
        if len(simplex) == 1:
            v = simplex[0]
            uf.make_set(v, (x[v], v))
        elif len(simplex) == 2:
            u, v = simplex
            ru, rv = uf.find(u), uf.find(v)
            if ru == rv:
                continue
            younger = max(uf.birth[ru], uf.birth[rv])
            death_vertex = _argmax_vertex(simplex, x)
            uf.union(ru, rv)
            birth, birth_vertex = younger
            if birth != x[death_vertex]:
                intervals.append(Interval(birth=float(birth), death=float(x[death_vertex]), degree=0,
                                          kind="ordinary", birth_vertex=int(birth_vertex),
                                          death_vertex=int(death_vertex)))
    roots = {uf.find(v) for v in range(K.n_vertices)}
    for r in roots:
        birth, birth_vertex = uf.birth[r]
        intervals.append(Interval(birth=float(birth), death=None, degree=0, kind="essential",
                                  birth_vertex=int(birth_vertex)))
    return Barcode(intervals=intervals)
