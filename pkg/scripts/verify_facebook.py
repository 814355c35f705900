import argparse
import logging
import os
import sys
import time

import numpy as np

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lexcluster.models.graph import Graph
from lexcluster.services import graph_service
from lexcluster.services.cnm_service import max_quality_step
from lexcluster.services.experiment_service import (
    TrialSetup,
    compare_algorithms,
    convergence_series,
    lexdfs_pipeline,
    outside_fraction,
    window_from_spec,
)
from lexcluster.services.lexdfs_service import accumulate_scores
from lexcluster.services.quality_service import QualityFunction

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def synthetic_graph(n: int, mean_degree: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    m = int(n * mean_degree / 2)
    pairs = rng.integers(0, n, size=(m, 2))
    return graph_service.from_edges(n, map(tuple, pairs.tolist()))


def verify_timing(g: Graph, seed: int) -> None:
    logger.info("Timing the clustering pipeline (l=20)...")
    started = time.perf_counter()
    d = lexdfs_pipeline(g, 20, seed)
    step, value = max_quality_step(d, g, QualityFunction.COMPACTNESS)
    elapsed = time.perf_counter() - started
    logger.info(f"Clustered in {elapsed:.1f}s, best compactness {value:.3f} at step {step}")
    assert elapsed < 60, f"clustering took {elapsed:.1f}s"

    logger.info("Timing a synthetic graph and its double...")
    timings = []
    for n in (20000, 40000):
        h = synthetic_graph(n, 20, seed)
        started = time.perf_counter()
        lexdfs_pipeline(h, 5, seed)
        timings.append(time.perf_counter() - started)
        logger.info(f"n={h.n} m={h.m}: {timings[-1]:.2f}s")
    ratio = timings[1] / timings[0]
    logger.info(f"Doubling ratio {ratio:.2f}")
    assert ratio <= 2.6, f"runtime grew by {ratio:.2f} when doubling the graph"


def verify_directions(g: Graph, seed: int, workers: int) -> None:
    logger.info("Comparing LexDFS with the greedy modularity baseline (l=20, trials=5)...")
    result = compare_algorithms(g, TrialSetup(runs=20), seed, trials=5, workers=workers)
    lex, cnm = result.summary.lexdfs, result.summary.cnm
    logger.info(f"Max modularity: lexdfs={lex.max_modularity:.4f} cnm={cnm.max_modularity:.4f}")
    logger.info(f"Max compactness: lexdfs={lex.max_compactness:.2f} cnm={cnm.max_compactness:.2f}")
    assert cnm.max_modularity >= lex.max_modularity
    assert lex.max_compactness >= cnm.max_compactness


def verify_convergence(g: Graph, seed: int, runs: int, workers: int) -> None:
    logger.info(f"Tracking edge-ranking convergence over {runs} runs...")
    _, orderings = accumulate_scores(g, runs, seed, workers=workers)
    windows = ["0", "20", "1%"]
    series = [convergence_series(orderings, window_from_spec(t, g.m), t) for t in windows]
    for narrow, wide in zip(series, series[1:]):
        assert all(a >= b for a, b in zip(narrow.values, wide.values))

    fractions = outside_fraction(series[-1], g.m)
    below = next((i for i, f in enumerate(fractions) if f < 0.10), None)
    logger.info(f"1% window: final outside fraction {fractions[-1]:.4f}")
    assert below is not None, "outside fraction never dropped below 10%"
    logger.info(f"Below 10% after {series[-1].run_indices[below] + 1} runs")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Acceptance checks on facebook_combined.txt")
    parser.add_argument("path")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--convergence-runs", type=int, default=300)
    args = parser.parse_args()

    graph = graph_service.load_edge_list(args.path)
    assert graph_service.check_dataset_size("facebook", graph), "not the facebook dataset"

    verify_timing(graph, args.seed)
    verify_directions(graph, args.seed, args.workers)
    verify_convergence(graph, args.seed, args.convergence_runs, args.workers)
    logger.info("All facebook checks passed")
