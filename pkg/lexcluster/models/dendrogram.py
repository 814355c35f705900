"""
Dendrogram models - the ordered merge history of an agglomerative clustering.
"""
from dataclasses import dataclass, field

import numpy as np

from lexcluster.models.graph import EdgeId


@dataclass(frozen=True, slots=True)
class MergeEvent:
    """
    One merge: the cluster labelled `absorbed_label` joins `surviving_label`.

    `score` is the mean LexDFS score of the edge for the LexDFS hierarchy and
    the modularity gain for the greedy baseline.
    """

    step: int
    edge: EdgeId
    absorbed_label: int
    surviving_label: int
    score: float


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """
    Merge sequence starting from singletons on `n` nodes.

    `edge_order` is the descending-score edge permutation that drove the
    merges (None for the greedy modularity baseline).
    """

    n: int
    events: tuple[MergeEvent, ...]
    algorithm: str
    edge_order: np.ndarray | None = None
    # stride -> (step -> labels snapshot), filled lazily by the replay
    checkpoints: dict[int, dict[int, np.ndarray]] = field(default_factory=dict, repr=False)

    @property
    def n_events(self) -> int:
        return len(self.events)

    def __repr__(self) -> str:
        return f"Dendrogram(algorithm={self.algorithm}, n={self.n}, events={self.n_events})"
