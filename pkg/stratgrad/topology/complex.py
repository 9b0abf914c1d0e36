"""
@file stratgrad/topology/complex.py

Simplicial complexes, filter vectors and lower-star filtration orders.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np

from stratgrad.errors import (
    ComplexValidationError,
    DuplicateSimplex,
    FilterShapeError,
    MissingFace,
    VertexOutOfRange,
)

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]
Direction = Literal["sublevel", "superlevel"]

MAX_DIMENSION = 3


@dataclass(frozen=True)
class SimplicialComplex:
    """
    Inclusion-closed simplex list on vertices 0..n_vertices-1.

    Simplices are sorted by dimension then lexicographically, so a simplex's
    position in ``simplices`` is its index everywhere else in the package.
    """
    n_vertices: int
    simplices: Tuple[Simplex, ...]
    index: Dict[Simplex, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {s: i for i, s in enumerate(self.simplices)})

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def __len__(self) -> int:
        return len(self.simplices)

    def boundary(self, i: int) -> List[int]:
        """Indices of the codimension-1 faces of simplex ``i``."""
        s = self.simplices[i]
        if len(s) == 1:
            return []
        return [self.index[f] for f in combinations(s, len(s) - 1)]

    def to_dict(self) -> dict:
        return {"n_vertices": self.n_vertices, "simplices": [list(s) for s in self.simplices]}


@dataclass(frozen=True)
class FiltrationOrder:
    """Simplex indices in filtration order with their entry values."""
    order: np.ndarray
    entry_values: np.ndarray


def validate_complex(raw: Sequence[Sequence[int]], n_vertices: Optional[int] = None) -> SimplicialComplex:
    """
    Normalize and validate a raw simplex list.

    Args:
        raw: Simplices as vertex lists (any order within a simplex).
        n_vertices: Vertex count; inferred from the largest index when omitted.

    Returns:
        A normalized SimplicialComplex.

    Raises:
        VertexOutOfRange, DuplicateSimplex, MissingFace.
    """
    simplices = []
    for s in raw:
        if len(s) == 0:
            raise MissingFace("empty simplex listed")
        if any(int(v) < 0 for v in s):
            raise VertexOutOfRange(f"negative vertex index in {list(s)}")
        t = tuple(sorted(int(v) for v in s))
        if len(set(t)) != len(t):
            raise DuplicateSimplex(f"repeated vertex inside simplex {list(s)}")
        if len(t) - 1 > MAX_DIMENSION:
            raise ComplexValidationError(f"simplex {list(t)} exceeds dimension {MAX_DIMENSION}")
        simplices.append(t)

    if n_vertices is None:
        n_vertices = 1 + max((v for s in simplices for v in s), default=-1)
    for s in simplices:
        if s[-1] >= n_vertices:
            raise VertexOutOfRange(f"vertex {s[-1]} out of range for n_vertices={n_vertices}")

    seen = set()
    for s in simplices:
        if s in seen:
            raise DuplicateSimplex(f"simplex {list(s)} listed twice")
        seen.add(s)

    for v in range(n_vertices):
        if (v,) not in seen:
            raise MissingFace(f"vertex [{v}] absent")
    for s in simplices:
        for k in range(1, len(s)):
            for face in combinations(s, k):
                if face not in seen:
                    raise MissingFace(f"face {list(face)} of {list(s)} absent")

    simplices.sort(key=lambda s: (len(s), s))
    return SimplicialComplex(n_vertices=n_vertices, simplices=tuple(simplices))


def check_filter(K: SimplicialComplex, x) -> np.ndarray:
    """Coerce ``x`` to a float vector paired with ``K``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != K.n_vertices:
        raise FilterShapeError(f"filter of shape {x.shape} does not match {K.n_vertices} vertices")
    if not np.all(np.isfinite(x)):
        raise FilterShapeError("filter has non-finite entries")
    return x


def entry_values(K: SimplicialComplex, x: np.ndarray, direction: Direction = "sublevel") -> np.ndarray:
    """Max (sublevel) or min (superlevel) filter value over each simplex's vertices."""
    reduce = max if direction == "sublevel" else min
    return np.array([reduce(x[v] for v in s) for s in K.simplices], dtype=float)


def lower_star_order(K: SimplicialComplex, x, direction: Direction = "sublevel") -> FiltrationOrder:
    """
    Order simplices by entry value, ties broken by dimension then index.

    Sublevel orders ascend by max-of-vertices; superlevel orders descend by
    min-of-vertices. Faces always precede their cofaces.
    """
    x = check_filter(K, x)
    values = entry_values(K, x, direction)
    dims = np.array([len(s) - 1 for s in K.simplices])
    idx = np.arange(len(K))
    primary = values if direction == "sublevel" else -values
    order = np.lexsort((idx, dims, primary))
    return FiltrationOrder(order=order, entry_values=values[order])
