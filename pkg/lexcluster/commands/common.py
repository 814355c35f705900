"""
Shared plumbing for the subcommands: run context, timing, graph loading.
"""
import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

from lexcluster.models.graph import Graph
from lexcluster.schemas.run import RunConfig, RunManifest
from lexcluster.services import graph_service
from lexcluster.services.quality_service import PathStatistic
from lexcluster.storage.base import file_sha256

logger = logging.getLogger(__name__)


class RunContext:
    """Output directory plus the manifest every command fills in."""

    def __init__(self, config: RunConfig, manifest: RunManifest):
        self.config = config
        self.manifest = manifest
        self.out_dir = Path(config.out_dir)

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def record(self, *paths: Path) -> None:
        self.manifest.outputs.extend(str(p) for p in paths)

    @contextmanager
    def timed(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - started
            self.manifest.timings[name] = elapsed
            logger.debug(f"{name} took {elapsed:.3f}s")


def load_graph(ctx: RunContext) -> Graph:
    """Load the input edge list, checksum it and check a named dataset's size."""
    config = ctx.config
    with ctx.timed("load"):
        ctx.manifest.input_sha256 = file_sha256(config.input)
        g = graph_service.load_edge_list(config.input, weighted=config.weighted)
    ctx.manifest.n, ctx.manifest.m = g.n, g.m
    if config.dataset:
        graph_service.check_dataset_size(config.dataset, g)
    return g


def path_statistic(config: RunConfig) -> PathStatistic:
    if config.mean_eccentricity:
        return PathStatistic.MEAN_ECCENTRICITY
    return PathStatistic.DIAMETER
