"""
cluster command - build a dendrogram and export the best clustering per
quality function.
"""
import logging
from contextlib import nullcontext

from lexcluster.commands.common import RunContext, load_graph, path_statistic
from lexcluster.schemas.run import Algorithm
from lexcluster.services.cnm_service import cnm_dendrogram, max_quality_step
from lexcluster.services.hierarchy_service import build_dendrogram, clustering_at, core_clusters
from lexcluster.services.lexdfs_service import accumulate_scores
from lexcluster.services.quality_service import QualityFunction
from lexcluster.storage import csv_store

logger = logging.getLogger(__name__)


def run(ctx: RunContext) -> None:
    """
    Writes dendrogram.csv and one clustering_<quality>.csv per quality
    function (modularity and compactness, normalized with --normalize).
    """
    config = ctx.config
    g = load_graph(ctx)

    with ctx.timed("dendrogram"):
        if config.algorithm == Algorithm.CNM:
            d = cnm_dendrogram(g)
        else:
            sink = (
                csv_store.VisitDumpWriter(g, ctx.path("visits.csv"))
                if config.dump_visits else nullcontext()
            )
            with sink as visit_sink:
                scores, _ = accumulate_scores(
                    g, config.runs, config.seed,
                    workers=config.workers,
                    keep_orderings=False,
                    debug=config.debug,
                    visit_sink=visit_sink,
                )
            if config.dump_visits:
                ctx.record(ctx.path("visits.csv"))
            d = build_dendrogram(g, scores)
    ctx.record(csv_store.write_dendrogram(g, d, ctx.path("dendrogram.csv")))
    ctx.manifest.results["n_events"] = d.n_events

    compactness = (
        QualityFunction.NORMALIZED_COMPACTNESS if config.normalize else QualityFunction.COMPACTNESS
    )
    for function in (QualityFunction.MODULARITY, compactness):
        with ctx.timed(f"best_{function.value}"):
            step, value = max_quality_step(
                d, g, function, config.diameter_mode, path_statistic(config),
                config.all_pairs_threshold,
            )
        best = clustering_at(d, step, config.checkpoint_stride)
        ctx.manifest.results[f"best_{function.value}_step"] = step
        ctx.manifest.results[f"best_{function.value}"] = value
        ctx.manifest.results[f"best_{function.value}_cores"] = len(core_clusters(best))
        ctx.record(csv_store.write_clustering(g, best, ctx.path(f"clustering_{function.value}.csv")))
        logger.info(
            f"Best {function.value} = {value:.6f} at step {step} "
            f"({best.n_clusters} clusters, {len(core_clusters(best))} cores)"
        )
