"""
stratgrad/importers/generators.py

Synthetic complexes and filters for the built-in experiments.
"""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from stratgrad.topology.complex import SimplicialComplex, validate_complex

# index -> value of the piecewise-linear registration profile on a 120-cycle
REGISTRATION_ANCHORS: Dict[int, float] = {0: 0.0, 30: 1.0, 45: 0.05, 60: 0.35, 75: 0.1, 90: 0.8}


def path_complex(n: int) -> SimplicialComplex:
    return validate_complex([[v] for v in range(n)] + [[v, v + 1] for v in range(n - 1)], n)


def cycle_complex(n: int) -> SimplicialComplex:
    return validate_complex([[v] for v in range(n)] + [[v, (v + 1) % n] for v in range(n)], n)


def registration_target(n: int = 120, anchors: Optional[Dict[int, float]] = None, noise: float = 0.1,
                        seed: int = 0) -> np.ndarray:
    """
    Piecewise-linear profile on an n-cycle plus uniform noise in [0, noise].

    Anchor indices refer to a 120-cycle and are rescaled for other sizes; the
    profile wraps around from the last anchor back to index 0.
    """
    anchors = REGISTRATION_ANCHORS if anchors is None else anchors
    idx = sorted(anchors)
    xp = [i * n / 120.0 for i in idx] + [float(n)]
    fp = [anchors[i] for i in idx] + [anchors[idx[0]]]
    profile = np.interp(np.arange(n, dtype=float), xp, fp)
    rng = np.random.default_rng(seed)
    return profile + rng.uniform(0.0, noise, size=n)


def embedded_cycle_graph(n_cycle: int = 24, n_branches: int = 3, branch_length: int = 3,
                         radius: float = 1.0, seed: int = 0) -> Tuple[SimplicialComplex, np.ndarray]:
    """
    A circle of ``n_cycle`` vertices in the plane with spurious pendant branches.

    Returns:
        (complex, vertex coordinates of shape (n_vertices, 2)).
    """
    rng = np.random.default_rng(seed)
    angles = 2 * math.pi * np.arange(n_cycle) / n_cycle
    coords = [np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])]
    edges = [[v, (v + 1) % n_cycle] for v in range(n_cycle)]
    anchor_choices = rng.choice(n_cycle, size=min(n_branches, n_cycle), replace=False)
    next_vertex = n_cycle
    for anchor in anchor_choices:
        direction = coords[0][anchor] / radius
        prev = int(anchor)
        for step in range(1, branch_length + 1):
            coords.append((coords[0][anchor] + 0.15 * step * radius * direction)[None, :])
            edges.append([prev, next_vertex])
            prev = next_vertex
            next_vertex += 1
    points = np.vstack(coords)
    K = validate_complex([[v] for v in range(next_vertex)] + edges, next_vertex)
    return K, points


def bootstrap_graphs(n_cycle: int = 24, k: int = 10, jitter: float = 0.05, keep_branch: float = 0.5,
                     n_branches: int = 3, branch_length: int = 3,
                     seed: int = 0) -> List[Tuple[SimplicialComplex, np.ndarray]]:
    """
    ``k`` perturbed copies of the embedded cycle graph.

    Each copy keeps every spurious branch with probability ``keep_branch`` and
    jitters all vertex coordinates with Gaussian noise of scale ``jitter``.
    """
    rng = np.random.default_rng(seed)
    base_K, base_pts = embedded_cycle_graph(n_cycle, n_branches, branch_length, seed=seed)
    copies = []
    for _ in range(k):
        keep = list(range(n_cycle))
        for b in range(n_branches):
            branch = list(range(n_cycle + b * branch_length, n_cycle + (b + 1) * branch_length))
            if branch and branch[-1] < base_K.n_vertices and rng.random() < keep_branch:
                keep.extend(branch)
        relabel = {old: new for new, old in enumerate(keep)}
        simplices = [[relabel[v] for v in s] for s in base_K.simplices if all(v in relabel for v in s)]
        K = validate_complex(simplices, len(keep))
        pts = base_pts[keep] + rng.normal(0.0, jitter, size=(len(keep), 2))
        copies.append((K, pts))
    return copies


def direction_filter(coords: np.ndarray, angle: float) -> np.ndarray:
    """Height of each vertex along the unit direction at ``angle``."""
    return np.asarray(coords) @ np.array([math.cos(angle), math.sin(angle)])


def uniform_start(n: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).uniform(0.0, 1.0, size=n)
