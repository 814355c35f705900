"""
quality command - evaluate an external clustering file.
"""
import logging

from lexcluster.commands.common import RunContext, load_graph, path_statistic
from lexcluster.core.errors import UsageError
from lexcluster.services.quality_service import clustering_report
from lexcluster.storage import csv_store

logger = logging.getLogger(__name__)


def run(ctx: RunContext) -> None:
    config = ctx.config
    if not config.clustering:
        raise UsageError("quality needs --clustering FILE")
    g = load_graph(ctx)
    c = csv_store.read_clustering(g, config.clustering)

    with ctx.timed("quality"):
        rows, summary = clustering_report(
            g, c, config.diameter_mode, path_statistic(config), config.all_pairs_threshold
        )
    ctx.manifest.results.update(summary.model_dump())
    ctx.record(*csv_store.write_quality(
        g, rows, summary, ctx.path("quality_clusters.csv"), ctx.path("quality_global.csv")
    ))
    logger.info(
        f"{summary.n_clusters} clusters: modularity={summary.modularity} "
        f"compactness={summary.compactness} conductance={summary.conductance}"
    )
