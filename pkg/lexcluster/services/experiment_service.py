"""
Experiment service - cluster profiles, quality traces, trial envelopes and
edge-ordering convergence for comparing the LexDFS hierarchy with the greedy
modularity baseline.
"""
import logging
import math
import re
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from lexcluster.core.errors import DataError, UsageError
from lexcluster.models.dendrogram import Dendrogram
from lexcluster.models.graph import Graph
from lexcluster.schemas.experiment import (
    AlgorithmSummary,
    ClusterProfile,
    ClusterProfilePoint,
    ComparisonSummary,
    ConvergenceSeries,
    EnvelopePoint,
    TracePoint,
)
from lexcluster.schemas.quality import ClusterQuality
from lexcluster.services.cnm_service import cnm_dendrogram
from lexcluster.services.hierarchy_service import build_dendrogram
from lexcluster.services.lexdfs_service import accumulate_scores
from lexcluster.services.quality_service import (
    DEFAULT_ALL_PAIRS_THRESHOLD,
    DiameterMode,
    PathStatistic,
    QualityTracker,
    cluster_quality,
)

logger = logging.getLogger(__name__)

_PERCENT = re.compile(r"^(\d+(?:\.\d+)?)%$")


def window_from_spec(token: str, m: int) -> int:
    """
    Parse a window token: a non-negative integer, or "p%" meaning the window
    covers p% of the edges in total (2w ~ p/100 * m).

    Raises:
        UsageError: malformed or negative window
    """
    token = token.strip()
    match = _PERCENT.match(token)
    if match:
        return round(float(match.group(1)) / 200 * m)
    try:
        w = int(token)
    except ValueError:
        raise UsageError(f"invalid window {token!r}: expected an integer or 'p%'")
    if w < 0:
        raise UsageError(f"window must be >= 0, got {w}")
    return w


def convergence_series(
    orderings: Sequence[np.ndarray],
    w: int,
    window_token: str | None = None,
    run_indices: Sequence[int] | None = None,
) -> ConvergenceSeries:
    """
    c_i(w) = number of edges whose rank moved by more than w between the
    consecutive rankings o_i and o_{i+1}.

    Args:
        orderings: edge id -> rank arrays, in run order
        w: window half-width
        window_token: token the window was parsed from (for reporting)
        run_indices: run number of every ordering (defaults to 1, 2, ...)

    Raises:
        UsageError: w < 0 or fewer than two orderings
    """
    if w < 0:
        raise UsageError(f"window must be >= 0, got {w}")
    if len(orderings) < 2:
        raise UsageError("convergence needs at least two edge rankings")
    if run_indices is None:
        run_indices = range(1, len(orderings) + 1)

    values = []
    for before, after in zip(orderings, orderings[1:]):
        inside = np.count_nonzero(np.abs(after - before) <= w)
        values.append(int(len(before) - inside))
    return ConvergenceSeries(
        window=w,
        window_token=window_token if window_token is not None else str(w),
        run_indices=list(run_indices[: len(values)]),
        values=values,
    )


def _profile_from_rows(
    d: Dendrogram,
    g: Graph,
    rows: Iterable[tuple[int, ClusterQuality]],
    dedup: bool,
    mode: DiameterMode,
    statistic: PathStatistic,
    all_pairs_threshold: int,
) -> ClusterProfile:
    points: list[ClusterProfilePoint] = []
    seen: set[tuple] = set()
    undefined = 0

    def emit(step: int, size: int, conductance: float | None, compactness: float) -> None:
        nonlocal undefined
        if conductance is None:
            undefined += 1
        key = (size, conductance, compactness)
        if dedup and key in seen:
            return
        seen.add(key)
        points.append(ClusterProfilePoint(
            algorithm=d.algorithm, step=step, size=size,
            conductance=conductance, compactness=compactness,
        ))

    for v in range(g.n):
        row = cluster_quality(g, [v], v, mode, statistic, all_pairs_threshold)
        emit(0, 1, row.conductance, row.compactness)
    for step, row in rows:
        emit(step, row.size, row.conductance, row.compactness)

    if undefined:
        logger.warning(f"{undefined} {d.algorithm} cluster(s) have undefined conductance")
    logger.info(f"Profile of {d.algorithm} dendrogram: {len(points)} point(s)")
    return ClusterProfile(algorithm=d.algorithm, points=points, undefined_conductance=undefined)


def cluster_profile(
    d: Dendrogram,
    g: Graph,
    dedup: bool = True,
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> ClusterProfile:
    """
    Size, conductance and compactness of every cluster the dendrogram creates,
    starting with the singletons of step 0.

    Clusters with undefined conductance keep their compactness and carry no
    conductance; they are counted. With `dedup`, repeated
    (size, conductance, compactness) triples are emitted once.
    """
    tracker = QualityTracker(g, mode, statistic, all_pairs_threshold)
    rows = ((event.step, row) for event, row in tracker.replay(d))
    return _profile_from_rows(d, g, rows, dedup, mode, statistic, all_pairs_threshold)


def _trace_scale(g: Graph, normalize: bool) -> float:
    if g.m == 0:
        raise DataError("quality traces need a graph with at least one edge")
    return 1 / g.m if normalize else 1.0


def _trace_point(d: Dendrogram, tracker: QualityTracker, scale: float) -> TracePoint:
    return TracePoint(
        algorithm=d.algorithm,
        step=tracker.step,
        modularity=tracker.modularity,
        compactness=tracker.compactness_total * scale,
    )


def quality_trace(
    d: Dendrogram,
    g: Graph,
    normalize: bool = False,
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> list[TracePoint]:
    """
    (step, modularity, compactness) for every step 0..|events|, evaluated
    incrementally along the merges.

    Raises:
        DataError: graph without edges
    """
    scale = _trace_scale(g, normalize)
    tracker = QualityTracker(g, mode, statistic, all_pairs_threshold)
    trace = [_trace_point(d, tracker, scale)]
    for _ in tracker.replay(d):
        trace.append(_trace_point(d, tracker, scale))
    return trace


@dataclass(frozen=True)
class TrialSetup:
    """Everything one repeated trial needs besides its seed."""

    runs: int
    normalize: bool = False
    mode: DiameterMode = DiameterMode.EXACT
    statistic: PathStatistic = PathStatistic.DIAMETER
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD


def lexdfs_pipeline(g: Graph, runs: int, seed, workers: int = 1) -> Dendrogram:
    """Scores from `runs` traversals, then the score-driven dendrogram."""
    scores, _ = accumulate_scores(g, runs, seed, workers=workers, keep_orderings=False)
    return build_dendrogram(g, scores)


def _trial_arrays(g: Graph, setup: TrialSetup, seed: np.random.SeedSequence) -> np.ndarray:
    d = lexdfs_pipeline(g, setup.runs, seed)
    trace = quality_trace(d, g, setup.normalize, setup.mode, setup.statistic, setup.all_pairs_threshold)
    return np.array([(p.modularity, p.compactness) for p in trace])


# Worker-process state, set once per process by the pool initializer
_worker_graph: Graph | None = None


def _init_worker(g: Graph) -> None:
    global _worker_graph
    _worker_graph = g


def _trial_in_worker(setup: TrialSetup, seed: np.random.SeedSequence) -> np.ndarray:
    return _trial_arrays(_worker_graph, setup, seed)


def repeated_trial_envelope(
    g: Graph,
    trials: int,
    setup: TrialSetup,
    seed: int | np.random.SeedSequence,
    workers: int = 1,
) -> list[EnvelopePoint]:
    """
    Run the LexDFS pipeline `trials` times on independent child seeds and
    aggregate the quality traces pointwise into min/mean/max.

    Raises:
        UsageError: trials < 1
    """
    if trials < 1:
        raise UsageError(f"trial count must be >= 1, got {trials}")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(trials)
    started = time.perf_counter()

    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(g,)
        ) as pool:
            traces = list(pool.map(_trial_in_worker, [setup] * trials, children))
    else:
        traces = [_trial_arrays(g, setup, child) for child in children]

    # Every trial replays n - #components merges, so the traces align
    stacked = np.stack(traces)
    low, mean, high = stacked.min(axis=0), stacked.mean(axis=0), stacked.max(axis=0)
    logger.info(f"Ran {trials} trial(s) in {time.perf_counter() - started:.2f}s")
    return [
        EnvelopePoint(
            algorithm="lexdfs",
            step=step,
            modularity_min=low[step, 0],
            modularity_mean=mean[step, 0],
            modularity_max=high[step, 0],
            compactness_min=low[step, 1],
            compactness_mean=mean[step, 1],
            compactness_max=high[step, 1],
        )
        for step in range(stacked.shape[1])
    ]


def _best(trace: list[TracePoint], key: str) -> tuple[int, float]:
    best = max(trace, key=lambda p: (getattr(p, key), -p.step))
    return best.step, getattr(best, key)


def summarize(d: Dendrogram, trace: list[TracePoint]) -> AlgorithmSummary:
    """Maximum modularity and compactness over a trace (smallest step on ties)."""
    q_step, q = _best(trace, "modularity")
    l_step, l = _best(trace, "compactness")
    return AlgorithmSummary(
        algorithm=d.algorithm,
        n_events=d.n_events,
        max_modularity=q,
        max_modularity_step=q_step,
        max_compactness=l,
        max_compactness_step=l_step,
    )


@dataclass
class ComparisonResult:
    summary: ComparisonSummary
    dendrograms: dict[str, Dendrogram]
    profiles: dict[str, ClusterProfile]
    traces: dict[str, list[TracePoint]]
    envelope: list[EnvelopePoint]


def _profile_and_trace(
    d: Dendrogram, g: Graph, setup: TrialSetup, dedup: bool
) -> tuple[ClusterProfile, list[TracePoint]]:
    """cluster_profile and quality_trace from a single replay."""
    scale = _trace_scale(g, setup.normalize)
    tracker = QualityTracker(g, setup.mode, setup.statistic, setup.all_pairs_threshold)
    rows: list[tuple[int, ClusterQuality]] = []
    trace = [_trace_point(d, tracker, scale)]
    for event, row in tracker.replay(d):
        rows.append((event.step, row))
        trace.append(_trace_point(d, tracker, scale))
    profile = _profile_from_rows(
        d, g, rows, dedup, setup.mode, setup.statistic, setup.all_pairs_threshold
    )
    return profile, trace


def compare_algorithms(
    g: Graph,
    setup: TrialSetup,
    seed: int,
    trials: int,
    dedup: bool = True,
    workers: int = 1,
) -> ComparisonResult:
    """
    Run the LexDFS pipeline and the greedy modularity baseline on `g` and
    collect profiles, traces, the LexDFS trial envelope and the maxima.

    The LexDFS dendrogram used for profile and trace comes from `seed`
    itself; the envelope trials use its spawned children.

    Raises:
        DataError: graph without edges
    """
    dendrograms = {
        "lexdfs": lexdfs_pipeline(g, setup.runs, seed, workers=workers),
        "cnm": cnm_dendrogram(g),
    }
    profiles, traces = {}, {}
    for name, d in dendrograms.items():
        profiles[name], traces[name] = _profile_and_trace(d, g, setup, dedup)
    envelope = repeated_trial_envelope(g, trials, setup, seed, workers)

    summary = ComparisonSummary(
        n=g.n,
        m=g.m,
        lexdfs=summarize(dendrograms["lexdfs"], traces["lexdfs"]),
        cnm=summarize(dendrograms["cnm"], traces["cnm"]),
        trials=trials,
    )
    logger.info(
        f"Max modularity lexdfs={summary.lexdfs.max_modularity:.6f} cnm={summary.cnm.max_modularity:.6f}; "
        f"max compactness lexdfs={summary.lexdfs.max_compactness:.6f} cnm={summary.cnm.max_compactness:.6f}"
    )
    return ComparisonResult(summary, dendrograms, profiles, traces, envelope)


def gnuplot_script(
    profile_csv: str | None = None,
    trace_csv: str | None = None,
    envelope_csv: str | None = None,
    convergence_csv: str | None = None,
    windows: Sequence[str] = (),
) -> str:
    """
    Gnuplot script plotting whichever of the given CSV files exist: cluster
    size against conductance and compactness (log-log), modularity and
    compactness per merge step, and c_i(w) per run for every window.
    """
    lines = [
        "# Generated by lexcluster",
        'set datafile separator ","',
        "set terminal pngcairo size 1000,700",
        "set key outside right",
        "set grid",
    ]
    algorithms = ("lexdfs", "cnm")

    if profile_csv:
        for column, name in ((4, "conductance"), (5, "compactness")):
            plots = ", ".join(
                f"'{profile_csv}' using 3:(strcol(1) eq \"{a}\" ? ${column} : 1/0) with points title \"{a}\""
                for a in algorithms
            )
            lines += [
                "",
                f"set output 'profile_{name}.png'",
                "set logscale xy",
                'set xlabel "cluster size"',
                f'set ylabel "{name}"',
                f"plot {plots}",
                "unset logscale",
            ]
    if trace_csv:
        for column, name in ((3, "modularity"), (4, "compactness")):
            plots = ", ".join(
                f"'{trace_csv}' using 2:(strcol(1) eq \"{a}\" ? ${column} : 1/0) with lines title \"{a}\""
                for a in algorithms
            )
            if envelope_csv:
                base = 3 if name == "modularity" else 6
                plots += (
                    f", '{envelope_csv}' using 2:{base}:{base + 2} with filledcurves "
                    f'fs transparent solid 0.2 title "lexdfs min/max"'
                    f", '{envelope_csv}' using 2:{base + 1} with lines dt 2 title \"lexdfs mean\""
                )
            lines += [
                "",
                f"set output 'trace_{name}.png'",
                'set xlabel "merge step"',
                f'set ylabel "{name}"',
                f"plot {plots}",
            ]
    if convergence_csv:
        plots = ", ".join(
            f"'{convergence_csv}' using 1:(strcol(2) eq \"{w}\" ? $4 : 1/0) with lines title \"w = {w}\""
            for w in windows
        ) or f"'{convergence_csv}' using 1:4 with points notitle"
        lines += [
            "",
            "set output 'convergence.png'",
            'set xlabel "run"',
            'set ylabel "edges outside the window"',
            f"plot {plots}",
        ]
    return "\n".join(lines) + "\n"


def outside_fraction(series: ConvergenceSeries, m: int) -> list[float]:
    """c_i(w) / m for every run pair."""
    return [value / m if m else math.nan for value in series.values]
