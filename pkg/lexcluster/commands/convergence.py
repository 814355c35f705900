"""
convergence command - how much the edge ranking still moves between runs.
"""
import logging

from lexcluster.commands.common import RunContext, load_graph
from lexcluster.core.errors import UsageError
from lexcluster.services.experiment_service import (
    convergence_series,
    gnuplot_script,
    outside_fraction,
    window_from_spec,
)
from lexcluster.services.lexdfs_service import accumulate_scores, kept_run_indices
from lexcluster.storage import csv_store

logger = logging.getLogger(__name__)


def run(ctx: RunContext) -> None:
    config = ctx.config
    if config.runs < 2:
        raise UsageError("convergence needs --runs >= 2")
    g = load_graph(ctx)
    windows = [(token, window_from_spec(token, g.m)) for token in config.windows]

    with ctx.timed("lexdfs"):
        _, orderings = accumulate_scores(
            g, config.runs, config.seed,
            workers=config.workers,
            ordering_stride=config.ordering_stride,
            debug=config.debug,
        )
    runs = kept_run_indices(config.runs, config.ordering_stride)
    series = [convergence_series(orderings, w, token, runs) for token, w in windows]
    for s in series:
        fractions = outside_fraction(s, g.m)
        ctx.manifest.results[f"final_outside_{s.window_token}"] = fractions[-1]
        logger.info(f"Window {s.window_token} (w={s.window}): last outside fraction {fractions[-1]:.4f}")
    ctx.record(csv_store.write_convergence(series, ctx.path("convergence.csv")))

    if config.gnuplot:
        script = ctx.path("convergence.gp")
        script.write_text(
            gnuplot_script(convergence_csv="convergence.csv", windows=[t for t, _ in windows]),
            encoding="utf-8",
        )
        ctx.record(script)
