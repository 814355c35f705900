"""
Graph and Clustering models - immutable, array-backed.

Node ids are dense integers in [0, n); edge ids are dense integers in [0, m).
"""
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse

from lexcluster.core.errors import ContractViolation, DataError

NodeId = int
EdgeId = int


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected simple graph with optional positive edge weights.

    `endpoints[e] = (u, v)` with u < v. The adjacency of node v is
    `indices[indptr[v]:indptr[v+1]]`, with the matching edge ids in
    `edge_ids`, ordered by ascending edge id. `node_labels[v]` is the
    external id the node had in its source file.
    """

    n: int
    endpoints: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    edge_ids: np.ndarray
    node_labels: np.ndarray
    weights: np.ndarray | None = field(default=None)

    @classmethod
    def from_simple_edges(
        cls,
        n: int,
        endpoints: np.ndarray,
        weights: np.ndarray | None = None,
        node_labels: np.ndarray | None = None,
    ) -> "Graph":
        """
        Build a graph from an already simplified (m, 2) endpoint array.

        Raises:
            ContractViolation: self-loop, out-of-range node or non-positive weight
        """
        endpoints = np.asarray(endpoints, dtype=np.int64).reshape(-1, 2)
        if len(endpoints) and (endpoints.min() < 0 or endpoints.max() >= n):
            raise ContractViolation("edge endpoint outside [0, n)")
        if np.any(endpoints[:, 0] == endpoints[:, 1]):
            raise ContractViolation("self-loops are not allowed")
        endpoints = np.sort(endpoints, axis=1)

        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64)
            if weights.shape != (len(endpoints),):
                raise ContractViolation("one weight per edge is required")
            if np.any(~(weights > 0)):
                raise DataError("edge weights must be strictly positive")
            weights = _frozen(weights.copy())

        m = len(endpoints)
        eids = np.arange(m, dtype=np.int64)
        src = np.concatenate([endpoints[:, 0], endpoints[:, 1]])
        dst = np.concatenate([endpoints[:, 1], endpoints[:, 0]])
        both = np.concatenate([eids, eids])
        order = np.lexsort((both, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

        if node_labels is None:
            node_labels = np.arange(n, dtype=np.int64)

        return cls(
            n=n,
            endpoints=_frozen(endpoints),
            indptr=_frozen(indptr),
            indices=_frozen(dst[order]),
            edge_ids=_frozen(both[order]),
            node_labels=_frozen(np.asarray(node_labels, dtype=np.int64)),
            weights=weights,
        )

    @property
    def m(self) -> int:
        return len(self.endpoints)

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.diff(self.indptr))

    def degree(self, v: NodeId) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: NodeId) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency(self, v: NodeId) -> list[tuple[NodeId, EdgeId]]:
        """Sequence of (neighbor, edge id) pairs of node v."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return list(zip(self.indices[lo:hi].tolist(), self.edge_ids[lo:hi].tolist()))

    @cached_property
    def neighbor_lists(self) -> list[list[int]]:
        """Plain-int adjacency for the Python-level traversal loops."""
        indices = self.indices.tolist()
        bounds = self.indptr.tolist()
        return [indices[bounds[v]:bounds[v + 1]] for v in range(self.n)]

    @cached_property
    def edge_id_lists(self) -> list[list[int]]:
        """Edge ids aligned with `neighbor_lists`."""
        edge_ids = self.edge_ids.tolist()
        bounds = self.indptr.tolist()
        return [edge_ids[bounds[v]:bounds[v + 1]] for v in range(self.n)]

    @cached_property
    def weight_array(self) -> np.ndarray:
        """Per-edge weights; unit weights for unweighted graphs."""
        if self.weights is None:
            return _frozen(np.ones(self.m, dtype=np.float64))
        return self.weights

    def edge_weight(self, e: EdgeId) -> float:
        return 1.0 if self.weights is None else float(self.weights[e])

    @cached_property
    def length_matrix(self) -> sparse.csr_matrix:
        """Symmetric CSR matrix of edge lengths (1 unweighted, 1/w weighted)."""
        lengths = 1.0 / self.weight_array[self.edge_ids]
        return sparse.csr_matrix(
            (lengths, self.indices, self.indptr), shape=(self.n, self.n)
        )

    def scaled(self, alpha: float) -> "Graph":
        """Same graph with every weight multiplied by alpha."""
        if not alpha > 0:
            raise DataError("scale factor must be strictly positive")
        return Graph.from_simple_edges(
            self.n, self.endpoints, self.weight_array * alpha, self.node_labels
        )

    def with_weight(self, e: EdgeId, weight: float) -> "Graph":
        """Same graph with edge e reweighted."""
        weights = self.weight_array.copy()
        weights[e] = weight
        return Graph.from_simple_edges(self.n, self.endpoints, weights, self.node_labels)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, weighted={self.is_weighted})"


def as_node_array(cluster: Iterable[int] | np.ndarray) -> np.ndarray:
    """Normalize a node set to a sorted array of unique node ids."""
    if isinstance(cluster, np.ndarray):
        return np.unique(cluster.astype(np.int64, copy=False))
    return np.unique(np.fromiter(cluster, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class Clustering:
    """
    Partition of the node set, stored as one label per node.

    Labels are arbitrary non-negative integers; clusters built by merging use
    the surviving node id of each cluster as its label.
    """

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ContractViolation("labels must be one-dimensional")
        object.__setattr__(self, "labels", _frozen(labels))

    @classmethod
    def singletons(cls, n: int) -> "Clustering":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def whole(cls, n: int) -> "Clustering":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_sets(cls, n: int, clusters: Iterable[Iterable[int]]) -> "Clustering":
        """
        Build a clustering from node sets; each cluster is labelled by its
        smallest member.

        Raises:
            DataError: the sets overlap or do not cover every node
        """
        labels = np.full(n, -1, dtype=np.int64)
        for cluster in clusters:
            members = as_node_array(cluster)
            if len(members) == 0:
                continue
            if np.any(labels[members] >= 0):
                raise DataError("clusters overlap")
            labels[members] = members[0]
        missing = np.flatnonzero(labels < 0)
        if len(missing):
            raise DataError(f"{len(missing)} node(s) are not assigned to a cluster")
        return cls(labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def clusters(self) -> dict[int, np.ndarray]:
        """Label -> sorted member array, in ascending label order."""
        order = np.argsort(self.labels, kind="stable")
        sorted_labels = self.labels[order]
        keys, starts = np.unique(sorted_labels, return_index=True)
        parts = np.split(order, starts[1:])
        return {int(k): _frozen(p) for k, p in zip(keys, parts)}

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    def members(self, label: int) -> np.ndarray:
        return self.clusters[label]

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(p.tolist()) for p in self.clusters.values()}

    def same_partition(self, other: "Clustering") -> bool:
        return self.n == other.n and self.as_sets() == other.as_sets()

    def __repr__(self) -> str:
        return f"Clustering(n={self.n}, clusters={self.n_clusters})"
