"""
Experiment schemas for profiles, traces, envelopes and convergence series.
"""
from pydantic import BaseModel, Field


class ClusterProfilePoint(BaseModel):
    """One cluster created during a dendrogram's lifetime."""

    algorithm: str
    step: int = Field(..., ge=0)  # 0 for the initial singletons
    size: int = Field(..., ge=1)
    conductance: float | None = None  # None when undefined
    compactness: float


class ClusterProfile(BaseModel):
    """Profile points plus the count of clusters with undefined conductance."""

    algorithm: str
    points: list[ClusterProfilePoint]
    undefined_conductance: int = 0


class TracePoint(BaseModel):
    """Global quality of the clustering materialized at one step."""

    algorithm: str
    step: int = Field(..., ge=0)
    modularity: float
    compactness: float


class EnvelopePoint(BaseModel):
    """Pointwise min/mean/max of repeated traces at one step."""

    algorithm: str
    step: int = Field(..., ge=0)
    modularity_min: float
    modularity_mean: float
    modularity_max: float
    compactness_min: float
    compactness_mean: float
    compactness_max: float


class ConvergenceSeries(BaseModel):
    """c_i(w) for every consecutive pair of kept edge rankings."""

    window: int = Field(..., ge=0)
    window_token: str
    run_indices: list[int]
    values: list[int]


class AlgorithmSummary(BaseModel):
    """Best steps of one dendrogram."""

    algorithm: str
    n_events: int
    max_modularity: float
    max_modularity_step: int
    max_compactness: float
    max_compactness_step: int


class ComparisonSummary(BaseModel):
    """Maxima of both algorithms on the same graph."""

    n: int
    m: int
    lexdfs: AlgorithmSummary
    cnm: AlgorithmSummary
    trials: int
