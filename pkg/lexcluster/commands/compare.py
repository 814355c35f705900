"""
compare command - LexDFS hierarchy against the greedy modularity baseline.
"""
import logging

from lexcluster.commands.common import RunContext, load_graph, path_statistic
from lexcluster.services.experiment_service import TrialSetup, compare_algorithms, gnuplot_script
from lexcluster.storage import csv_store

logger = logging.getLogger(__name__)


def run(ctx: RunContext) -> None:
    """
    Writes profile.csv, trace.csv, envelope.csv, both dendrograms and
    summary.json (plus compare.gp with --gnuplot).
    """
    config = ctx.config
    g = load_graph(ctx)
    setup = TrialSetup(
        runs=config.runs,
        normalize=config.normalize,
        mode=config.diameter_mode,
        statistic=path_statistic(config),
        all_pairs_threshold=config.all_pairs_threshold,
    )
    with ctx.timed("compare"):
        result = compare_algorithms(
            g, setup, config.seed, config.trials,
            dedup=not config.raw_profile, workers=config.workers,
        )

    for name, d in result.dendrograms.items():
        ctx.record(csv_store.write_dendrogram(g, d, ctx.path(f"dendrogram_{name}.csv")))
    ctx.record(csv_store.write_profile(
        [p for profile in result.profiles.values() for p in profile.points], ctx.path("profile.csv")
    ))
    ctx.record(csv_store.write_trace(
        [p for trace in result.traces.values() for p in trace], ctx.path("trace.csv")
    ))
    ctx.record(csv_store.write_envelope(result.envelope, ctx.path("envelope.csv")))

    summary_path = ctx.path("summary.json")
    summary_path.write_text(result.summary.model_dump_json(indent=2) + "\n", encoding="utf-8")
    ctx.record(summary_path)
    ctx.manifest.results.update({
        "lexdfs_max_modularity": result.summary.lexdfs.max_modularity,
        "cnm_max_modularity": result.summary.cnm.max_modularity,
        "lexdfs_max_compactness": result.summary.lexdfs.max_compactness,
        "cnm_max_compactness": result.summary.cnm.max_compactness,
    })

    if config.gnuplot:
        script = ctx.path("compare.gp")
        script.write_text(
            gnuplot_script(profile_csv="profile.csv", trace_csv="trace.csv", envelope_csv="envelope.csv"),
            encoding="utf-8",
        )
        ctx.record(script)
