"""
@file stratgrad/models.py

Defines the Pydantic data models: barcode payloads, optimizer configuration
and optimizer traces.
"""

import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Interval(BaseModel):
    """
    One bar of a persistence barcode.

    Endpoints are stored as (min, max); ``flipped`` records that the natural
    orientation of the pair ran the other way (relative pairs and extended
    pairs in degree >= 1).

    Attributes:
        birth: Lower endpoint.
        death: Upper endpoint, or None for an essential class.
        degree: Homology degree.
        kind: Pair type.
        birth_vertex: Vertex whose filter value equals ``birth``.
        death_vertex: Vertex whose filter value equals ``death`` (None when essential).
        flipped: True when the natural (birth, death) orientation was reversed.
    """
    model_config = ConfigDict(frozen=True)

    birth: float
    death: Optional[float] = Field(default=None, description="None encodes the +inf essential sentinel")
    degree: int = Field(ge=0)
    kind: Literal["ordinary", "relative", "extended", "essential"]
    birth_vertex: int = Field(ge=0)
    death_vertex: Optional[int] = None
    flipped: bool = False

    @property
    def is_essential(self) -> bool:
        return self.death is None


class Barcode(BaseModel):
    """
    Finite multiset of intervals; zero-length intervals are never stored.

    Attributes:
        intervals: The bars, in the order the reduction produced them.
    """
    intervals: List[Interval] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.intervals)

    def in_degree(self, degree: int) -> "Barcode":
        return Barcode(intervals=[iv for iv in self.intervals if iv.degree == degree])

    def finite(self) -> "Barcode":
        return Barcode(intervals=[iv for iv in self.intervals if not iv.is_essential])


class SgsConfig(BaseModel):
    """
    Parameters of a stratified gradient sampling run.

    Attributes:
        eps: Initial exploration radius.
        eta: Critical gradient norm (stopping threshold).
        c0: Initial controlling constant.
        beta: Descent rate in (0, 1).
        gamma: Decay rate in (0, 1).
        max_iters: Iteration budget.
        cap: Optional cap on sampled strata per oracle call.
        seed: RNG seed.
        variant: "full" update step, "simple" known-Lipschitz step, or "quick"
            one-shot radius assignment.
        lipschitz: Overrides the objective's gradient Lipschitz bound.
        search: Cayley-graph traversal order for the mirror oracle.
        regularization: Weight of the optional lambda * ||x||^2 term.
    """
    eps: float = Field(gt=0)
    eta: float = Field(default=0.01, ge=0)
    c0: float = Field(default=1.0, gt=0)
    beta: float = Field(default=0.5, gt=0, lt=1)
    gamma: float = Field(default=0.5, gt=0, lt=1)
    max_iters: int = Field(default=1000, ge=0)
    cap: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    variant: Literal["full", "simple", "quick"] = "full"
    lipschitz: Optional[float] = Field(default=None, ge=0)
    search: Literal["best-first", "dfs"] = "best-first"
    regularization: float = Field(default=0.0, ge=0)


class BaselineConfig(BaseModel):
    """
    Parameters shared by GD, GD-with-decay and classical gradient sampling.

    Attributes:
        eps: Step size for GD/GDwD, sampling radius for GS.
        eta: Critical gradient norm.
        beta: Armijo rate for GS backtracking.
        gamma: Backtracking factor for GS.
        max_iters: Iteration budget.
        samples: GS sample count per iteration (defaults to n + 1).
        seed: RNG seed.
    """
    eps: float = Field(gt=0)
    eta: float = Field(default=0.01, ge=0)
    beta: float = Field(default=0.5, gt=0, lt=1)
    gamma: float = Field(default=0.5, gt=0, lt=1)
    max_iters: int = Field(default=1000, ge=0)
    samples: Optional[int] = Field(default=None, ge=1)
    seed: int = 0


class IterationRecord(BaseModel):
    """One row of an optimizer trace."""
    k: int
    x: List[float]
    f: float
    g_norm: float
    eps_k: float
    t_k: float
    C_k: Optional[float] = None
    strata: int = 0
    wall_ms: float = 0.0


class OptimizerTrace(BaseModel):
    """
    Per-iteration records plus the reason the run stopped.

    Attributes:
        records: Iteration rows in order; the last one carries the final iterate.
        reason: "GradientBelowEta" or "MaxIters".
    """
    records: List[IterationRecord] = Field(default_factory=list)
    reason: Optional[Literal["GradientBelowEta", "MaxIters"]] = None

    @property
    def iterations(self) -> int:
        """Number of steps taken."""
        return sum(1 for r in self.records if r.t_k > 0)

    @property
    def final_x(self) -> List[float]:
        return self.records[-1].x

    @property
    def final_f(self) -> float:
        return self.records[-1].f

    def check_descent(self, beta: float) -> List[int]:
        """
        Indices k where f(x_{k+1}) < f(x_k) - beta * t_k * ||g_k||^2 fails.

        Args:
            beta: Descent rate used by the run.

        Returns:
            Offending iteration indices; empty for a valid trace.
        """
        bad = []
        for cur, nxt in zip(self.records, self.records[1:]):
            if cur.t_k <= 0:
                continue
            if not nxt.f < cur.f - beta * cur.t_k * cur.g_norm ** 2:
                bad.append(cur.k)
        return bad


class TargetSpec(BaseModel):
    """Registration target: a (complex, filter) pair, a diagram file, or the built-in generator."""
    complex: Optional[str] = None
    filter: Optional[str] = None
    diagram: Optional[str] = None
    generator: Optional[Dict[str, float]] = None

    @model_validator(mode="after")
    def _one_source(self):
        sources = [self.diagram is not None, self.complex is not None or self.filter is not None,
                   self.generator is not None]
        if sum(sources) > 1:
            raise ValueError("target must use exactly one of diagram, complex+filter or generator")
        if (self.complex is None) != (self.filter is None):
            raise ValueError("target complex and filter must be given together")
        return self


class ExperimentConfig(BaseModel):
    """
    JSON experiment description consumed by the ``optimize`` subcommand.

    Attributes:
        experiment: Which built-in objective to build.
        mode: Optimizer (SGS or a baseline).
        sgs: SGS parameters (also feeds eps/eta/beta/gamma/max_iters of baselines).
        complex: Complex file (total-pers); defaults to the 5-vertex path.
        filter: Initial filter file; otherwise ``x0`` or the experiment default.
        x0: Inline initial point.
        target: Registration target source.
        q: Diagram distance exponent.
        template_size: Cycle length of the registration template.
        directions: Projection angles (radians) for the frechet experiment.
        n_bootstrap: Number of bootstrapped graphs for the frechet experiment.
        n_starts: Random starts tried for the registration experiment when no
            filter or x0 is given; the run with the lowest final loss is kept.
        gs_samples: GS sample count per iteration.
        output_dir: Where trace and filter files go.
        write_diagrams: Also write one diagram per iteration.
        record_timing: Write wall-clock milliseconds into the trace.
    """
    experiment: Literal["fig1", "total-pers", "registration", "frechet"]
    mode: Literal["SGS", "GD", "GDwD", "GS"] = "SGS"
    sgs: SgsConfig
    complex: Optional[str] = None
    filter: Optional[str] = None
    x0: Optional[List[float]] = None
    target: Optional[TargetSpec] = None
    q: float = Field(default=2.0, ge=1)
    template_size: int = Field(default=4, ge=3)
    directions: List[float] = Field(
        default_factory=lambda: [0.0, math.pi / 2, math.pi / 4, -math.pi / 4])
    n_bootstrap: int = Field(default=10, ge=1)
    n_starts: int = Field(default=5, ge=1)
    gs_samples: Optional[int] = Field(default=None, ge=1)
    output_dir: Optional[str] = None
    write_diagrams: bool = False
    record_timing: bool = True

    @field_validator("q")
    @classmethod
    def _finite_q(cls, q: float) -> float:
        if not math.isfinite(q):
            raise ValueError("q must be finite")
        return q
