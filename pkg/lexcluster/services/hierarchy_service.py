"""
Hierarchy service - score-driven agglomerative merging over a disjoint-set forest.
"""
import logging
import math
from collections.abc import Iterator

import numpy as np

from lexcluster.core.errors import StepOutOfRangeError, UsageError
from lexcluster.models.dendrogram import Dendrogram, MergeEvent
from lexcluster.models.graph import Clustering, Graph
from lexcluster.models.traversal import EdgeScores
from lexcluster.services.lexdfs_service import descending_edge_order

logger = logging.getLogger(__name__)


class DisjointSet:
    """
    Array-backed disjoint-set forest with union by size and path compression.

    Roots double as cluster labels.
    """

    def __init__(self, n: int, parent: np.ndarray | None = None):
        self.parent = list(range(n)) if parent is None else parent.tolist()
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        # Compress path
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> tuple[int, int] | None:
        """
        Merge the sets of a and b.

        Returns:
            (surviving_root, absorbed_root), or None if already joined.
            The larger set survives; on equal sizes the smaller root does.
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        if self.size[ra] < self.size[rb] or (self.size[ra] == self.size[rb] and rb < ra):
            ra, rb = rb, ra
        self.link(rb, ra)
        return ra, rb

    def link(self, absorbed_root: int, surviving_root: int) -> None:
        """Attach one root under another, as recorded by a merge event."""
        self.parent[absorbed_root] = surviving_root
        self.size[surviving_root] += self.size[absorbed_root]

    def labels(self) -> np.ndarray:
        return np.array([self.find(v) for v in range(len(self.parent))], dtype=np.int64)


def build_dendrogram(g: Graph, scores: EdgeScores) -> Dendrogram:
    """
    Merge endpoint clusters edge by edge in descending mean-score order
    (ties by ascending edge id).

    Every edge is processed, including the last one; intra-cluster edges
    produce no event.
    """
    if len(scores.mean) != g.m:
        raise UsageError(f"scores cover {len(scores.mean)} edges, graph has {g.m}")

    order = descending_edge_order(scores.mean)
    forest = DisjointSet(g.n)
    events: list[MergeEvent] = []
    endpoints = g.endpoints.tolist()
    mean = scores.mean.tolist()

    for e in order.tolist():
        u, v = endpoints[e]
        merged = forest.union(u, v)
        if merged is None:
            continue
        surviving, absorbed = merged
        events.append(MergeEvent(len(events) + 1, e, absorbed, surviving, mean[e]))

    order.setflags(write=False)
    logger.info(f"Built LexDFS dendrogram with {len(events)} merge events")
    return Dendrogram(n=g.n, events=tuple(events), algorithm="lexdfs", edge_order=order)


def _checkpoint_stride(d: Dendrogram, stride: int) -> int:
    return stride if stride > 0 else max(1, math.isqrt(d.n_events))


def _build_checkpoints(d: Dendrogram, stride: int) -> dict[int, np.ndarray]:
    forest = DisjointSet(d.n)
    snapshots = {0: np.arange(d.n, dtype=np.int64)}
    for event in d.events:
        forest.link(event.absorbed_label, event.surviving_label)
        if event.step % stride == 0:
            snapshots[event.step] = forest.labels()
    logger.debug(f"Built {len(snapshots)} replay checkpoints (stride {stride})")
    return snapshots


def clustering_at(d: Dendrogram, step: int, stride: int = 0) -> Clustering:
    """
    Partition after replaying the first `step` merge events (0 = singletons).

    Replays from the nearest checkpoint at or before `step`. Checkpoints are
    memoized on the dendrogram per stride.

    Raises:
        StepOutOfRangeError: step outside [0, |events|]
    """
    if not 0 <= step <= d.n_events:
        raise StepOutOfRangeError(f"step {step} outside [0, {d.n_events}]")
    stride = _checkpoint_stride(d, stride)
    snapshots = d.checkpoints.get(stride)
    if snapshots is None:
        snapshots = d.checkpoints[stride] = _build_checkpoints(d, stride)

    base = max(k for k in snapshots if k <= step)
    forest = DisjointSet(d.n, parent=snapshots[base])
    for event in d.events[base:step]:
        forest.link(event.absorbed_label, event.surviving_label)
    return Clustering(forest.labels())


def merged_cluster_sequence(d: Dendrogram) -> Iterator[tuple[int, frozenset[int]]]:
    """Yield (step, members of the newly merged cluster) for every event."""
    members: dict[int, list[int]] = {}
    for event in d.events:
        absorbed = members.pop(event.absorbed_label, None) or [event.absorbed_label]
        surviving = members.get(event.surviving_label) or [event.surviving_label]
        # Extend the larger list with the smaller one
        if len(absorbed) > len(surviving):
            absorbed, surviving = surviving, absorbed
        surviving.extend(absorbed)
        members[event.surviving_label] = surviving
        yield event.step, frozenset(surviving)


def clustering_at_score(d: Dendrogram, threshold: float) -> Clustering:
    """
    Clustering induced by the edges whose mean score is at least `threshold`.

    Raises:
        UsageError: the dendrogram is not ordered by descending score
    """
    scores = [event.score for event in d.events]
    if any(a < b for a, b in zip(scores, scores[1:])):
        raise UsageError(f"{d.algorithm} dendrogram is not ordered by score")
    step = sum(1 for s in scores if s >= threshold)
    return clustering_at(d, step)


def core_clusters(c: Clustering, min_size: int = 2) -> dict[int, np.ndarray]:
    """Clusters with at least `min_size` members; smaller ones stay unclassified."""
    return {label: members for label, members in c.clusters.items() if len(members) >= min_size}
