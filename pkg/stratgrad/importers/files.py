"""
@file stratgrad/importers/files.py

Readers and writers for complexes, filters, diagrams, traces and final
filters.

Formats:
    complex  JSON {"n_vertices": int, "simplices": [[int, ...], ...]}
    filter   JSON array of floats, or a single-column CSV
    diagram  JSON list of {birth, death, degree, kind, birth_vertex, death_vertex}
             (death null for essential classes)
    trace    CSV with columns k, f, g_norm, eps_k, t_k, C_k, strata, wall_ms
"""

import csv
import json
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
from pydantic import TypeAdapter

from stratgrad.models import Barcode, Interval, OptimizerTrace
from stratgrad.topology.complex import SimplicialComplex, validate_complex

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TRACE_COLUMNS = ["k", "f", "g_norm", "eps_k", "t_k", "C_k", "strata", "wall_ms"]

_intervals = TypeAdapter(List[Interval])


def load_complex(path: PathLike) -> SimplicialComplex:
    with open(path) as fh:
        raw = json.load(fh)
    return validate_complex(raw["simplices"], raw.get("n_vertices"))


def save_complex(K: SimplicialComplex, path: PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(K.to_dict(), fh)


def load_filter(path: PathLike) -> np.ndarray:
    """Read a filter from JSON (array) or CSV (one value per row)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return np.atleast_1d(np.loadtxt(path, delimiter=",", dtype=float))
    with open(path) as fh:
        return np.asarray(json.load(fh), dtype=float)


def save_filter(x, path: PathLike) -> None:
    with open(path, "w") as fh:
        json.dump([float(v) for v in np.asarray(x, dtype=float)], fh)


def diagram_to_json(B: Barcode) -> list:
    return [iv.model_dump(mode="json") for iv in B.intervals]


def load_diagram(path: PathLike) -> Barcode:
    with open(path) as fh:
        return Barcode(intervals=_intervals.validate_python(json.load(fh)))


def save_diagram(B: Barcode, path: PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(diagram_to_json(B), fh, indent=2)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_trace_csv(trace: OptimizerTrace, path: PathLike) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for rec in trace.records:
            writer.writerow([_cell(getattr(rec, col)) for col in TRACE_COLUMNS])
    logger.info(f"wrote {len(trace.records)} trace rows to {path}")


def read_trace_csv(path: PathLike) -> List[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
