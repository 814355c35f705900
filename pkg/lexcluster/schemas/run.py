"""
Run schemas - per-invocation configuration and the run manifest.
"""
from datetime import datetime
from enum import Enum

from pydantic import BaseModel, Field

from lexcluster.services.quality_service import DiameterMode

MAX_SEED = 2**64 - 1


class Algorithm(str, Enum):
    LEXDFS = "lexdfs"
    CNM = "cnm"


class RunConfig(BaseModel):
    """Configuration of one command invocation; flags override Settings."""

    command: str
    input: str
    algorithm: Algorithm = Algorithm.LEXDFS
    runs: int = Field(20, ge=1)
    seed: int = Field(0, ge=0, le=MAX_SEED)
    trials: int = Field(20, ge=1)
    windows: list[str] = Field(default_factory=lambda: ["0", "20", "1%"])
    mean_eccentricity: bool = False
    normalize: bool = False
    diameter_mode: DiameterMode = DiameterMode.EXACT
    all_pairs_threshold: int = Field(256, ge=1)
    workers: int = Field(1, ge=1)
    weighted: bool = False
    dataset: str | None = None
    clustering: str | None = None
    dump_visits: bool = False
    raw_profile: bool = False
    gnuplot: bool = False
    ordering_stride: int = Field(1, ge=1)
    checkpoint_stride: int = Field(0, ge=0)
    debug: bool = False
    out_dir: str = "results"


class RunManifest(BaseModel):
    """What was run, on which data, and how it ended."""

    run_id: str
    command: str
    config: RunConfig | None = None  # None when the flags failed validation
    started_at: datetime
    finished_at: datetime | None = None
    input_sha256: str | None = None
    n: int | None = None
    m: int | None = None
    timings: dict[str, float] = Field(default_factory=dict)
    results: dict[str, float | int | None] = Field(default_factory=dict)
    outputs: list[str] = Field(default_factory=list)
    status: str = "running"
    error: str | None = None
    exit_code: int | None = None
