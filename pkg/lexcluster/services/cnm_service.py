"""
Greedy modularity baseline - agglomerative merging by best modularity gain.

Communities start as singletons labelled by node id. Every connected pair
(i, j) carries the gain dQ_ij of merging it; the pair with the largest gain
is merged next and the gains of the merged community's neighbours are
updated in place.
"""
import heapq
import logging
import time
from collections.abc import Callable

from lexcluster.core.errors import DataError
from lexcluster.models.dendrogram import Dendrogram, MergeEvent
from lexcluster.models.graph import Clustering, Graph
from lexcluster.services.hierarchy_service import clustering_at
from lexcluster.services.quality_service import (
    DEFAULT_ALL_PAIRS_THRESHOLD,
    DiameterMode,
    PathStatistic,
    QualityFunction,
    QualityTracker,
)

logger = logging.getLogger(__name__)


def cnm_dendrogram(g: Graph) -> Dendrogram:
    """
    Merge the connected community pair with the largest modularity gain until
    every component is a single community.

    Merging continues after the gain turns negative so the whole trace can be
    compared step by step. Ties go to the smallest (label, label) pair. Each
    event records the smallest edge id joining the two communities and the
    gain of the merge as its score. The community with more neighbouring
    communities survives (smaller label on ties).

    Raises:
        DataError: graph without edges
    """
    if g.m == 0:
        raise DataError("greedy modularity needs at least one edge")

    started = time.perf_counter()
    two_m = 2 * g.m
    a = (g.degrees / two_m).tolist()
    gain: list[dict[int, float]] = [{} for _ in range(g.n)]
    link: list[dict[int, int]] = [{} for _ in range(g.n)]
    heap: list[tuple[float, int, int]] = []

    for e, (u, v) in enumerate(g.endpoints.tolist()):
        value = 2 * (1 / two_m - a[u] * a[v])
        gain[u][v] = gain[v][u] = value
        link[u][v] = link[v][u] = e
        heap.append((-value, u, v))
    heapq.heapify(heap)

    events: list[MergeEvent] = []
    while heap:
        neg, i, j = heapq.heappop(heap)
        # Stale entry: a community is gone or the gain changed since the push
        if gain[i].get(j) != -neg:
            continue
        s, t = (j, i) if len(gain[j]) > len(gain[i]) else (i, j)
        edge = link[s].pop(t)
        del link[t][s]
        del gain[s][t]
        del gain[t][s]

        only_s = [k for k in gain[s] if k not in gain[t]]
        for k, value_tk in gain[t].items():
            if k in gain[s]:
                value = gain[s][k] + value_tk
            else:
                value = value_tk - 2 * a[s] * a[k]
            gain[s][k] = gain[k][s] = value
            del gain[k][t]
            joining = min(link[s].get(k, link[t][k]), link[t][k])
            link[s][k] = link[k][s] = joining
            del link[k][t]
            heapq.heappush(heap, (-value, min(s, k), max(s, k)))
        for k in only_s:
            value = gain[s][k] - 2 * a[t] * a[k]
            gain[s][k] = gain[k][s] = value
            heapq.heappush(heap, (-value, min(s, k), max(s, k)))

        a[s] += a[t]
        a[t] = 0.0
        gain[t] = {}
        link[t] = {}
        events.append(MergeEvent(len(events) + 1, edge, t, s, -neg))

    logger.info(
        f"Built greedy modularity dendrogram with {len(events)} merge events "
        f"in {time.perf_counter() - started:.2f}s"
    )
    return Dendrogram(n=g.n, events=tuple(events), algorithm="cnm")


def max_quality_step(
    d: Dendrogram,
    g: Graph,
    f: QualityFunction | Callable[[Graph, Clustering], float],
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> tuple[int, float]:
    """
    Step (smallest on ties) whose clustering maximizes `f`, and that value.

    Named quality functions are evaluated incrementally along the merges;
    any other callable is evaluated on every materialized clustering.
    """
    if isinstance(f, QualityFunction):
        # Modularity needs only counts, never path lengths
        paths = f != QualityFunction.MODULARITY
        tracker = QualityTracker(g, mode, statistic, all_pairs_threshold, paths=paths)
        best_step, best = 0, tracker.value(f)
        for event, _ in tracker.replay(d):
            value = tracker.value(f)
            if value > best:
                best_step, best = event.step, value
    else:
        best_step, best = 0, f(g, clustering_at(d, 0))
        for step in range(1, d.n_events + 1):
            value = f(g, clustering_at(d, step))
            if value > best:
                best_step, best = step, value

    name = f.value if isinstance(f, QualityFunction) else getattr(f, "__name__", "quality")
    logger.info(f"Best {name} on {d.algorithm} dendrogram: step {best_step} = {best}")
    return best_step, best
