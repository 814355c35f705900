"""
Quality schemas for per-cluster and per-clustering reports.
"""
from pydantic import BaseModel, Field, computed_field


class ClusterQuality(BaseModel):
    """Measurements of one cluster."""

    cluster_label: int
    size: int = Field(..., ge=1)
    internal_edges: int = Field(..., ge=0)
    internal_weight: float = Field(..., ge=0)
    volume: int = Field(..., ge=0)
    cut: int = Field(..., ge=0)
    diameter: float | None = None  # +inf when disconnected, None when not computed
    compactness: float | None = None
    conductance: float | None = None  # None when undefined
    disconnected: bool = False
    approximate: bool = False


class ClusteringQuality(BaseModel):
    """Global measurements of one clustering."""

    n_clusters: int
    modularity: float | None = None
    coverage: float | None = None
    compactness: float | None = None
    normalized_compactness: float | None = None
    conductance: float | None = None
    undefined_conductance: int = 0


class AxiomReport(BaseModel):
    """Outcome of the scale-invariance, locality and monotonicity checks."""

    alpha: float
    scale_checks: int = 0
    scale_violations: list[str] = Field(default_factory=list)
    locality_checks: int = 0
    locality_violations: list[str] = Field(default_factory=list)
    monotonicity_checks: int = 0
    monotonicity_violations: list[str] = Field(default_factory=list)

    @computed_field
    @property
    def ok(self) -> bool:
        return not (
            self.scale_violations or self.locality_violations or self.monotonicity_violations
        )
