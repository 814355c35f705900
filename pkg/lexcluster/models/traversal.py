"""
Traversal models - LexDFS visit orders and running-mean edge scores.
"""
from dataclasses import dataclass

import numpy as np

from lexcluster.core.errors import ContractViolation

# Label entries, most recent visit iteration first
LexLabel = list[int]


@dataclass(frozen=True, eq=False)
class VisitOrder:
    """
    Visit iteration of every node: 0 = unvisited, otherwise >= 1.

    `restarts` counts how many times the traversal jumped to a new component.
    """

    visited: np.ndarray
    start: int
    restarts: int = 0

    @property
    def n(self) -> int:
        return len(self.visited)

    def is_complete(self) -> bool:
        """True when the visit values are exactly a permutation of 1..n."""
        return bool(np.array_equal(np.sort(self.visited), np.arange(1, self.n + 1)))


@dataclass(frozen=True, eq=False)
class EdgeScores:
    """Per-edge running mean of the visit-time score after `runs_completed` runs."""

    mean: np.ndarray
    runs_completed: int

    @classmethod
    def empty(cls, m: int) -> "EdgeScores":
        return cls(np.zeros(m, dtype=np.float64), 0)

    def updated(self, run_scores: np.ndarray) -> "EdgeScores":
        """Fold one more run in with e.score = (e.score*(i-1) + s) / i."""
        if run_scores.shape != self.mean.shape:
            raise ContractViolation("run scores must cover every edge")
        i = self.runs_completed + 1
        mean = (self.mean * (i - 1) + run_scores) / i
        mean.setflags(write=False)
        return EdgeScores(mean, i)
