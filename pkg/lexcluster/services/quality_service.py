"""
Quality service - conductance, modularity, coverage and compactness.

Compactness of a cluster is its internal edge weight (edge count when
unweighted) divided by the diameter of its induced subgraph, where an edge of
weight w has length 1/w. Edgeless clusters score 0, and so do disconnected
ones (infinite diameter).
"""
import enum
import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components, shortest_path

from lexcluster.core.errors import (
    ContractViolation,
    DataError,
    EmptyClusterError,
    UndefinedConductanceError,
)
from lexcluster.models.dendrogram import Dendrogram, MergeEvent
from lexcluster.models.graph import Clustering, Graph, as_node_array
from lexcluster.schemas.quality import AxiomReport, ClusterQuality, ClusteringQuality
from lexcluster.services import graph_service

logger = logging.getLogger(__name__)

DEFAULT_ALL_PAIRS_THRESHOLD = 256
DEFAULT_GROW_SOURCES = 16


class DiameterMode(str, enum.Enum):
    """How cluster diameters are obtained."""
    EXACT = "exact"
    APPROX = "approx"  # double-sweep lower bound


class PathStatistic(str, enum.Enum):
    """Path length used in the compactness denominator."""
    DIAMETER = "diameter"
    MEAN_ECCENTRICITY = "mean_eccentricity"


def induced_lengths(g: Graph, members: np.ndarray) -> sparse.csr_matrix:
    """Edge-length matrix of the subgraph induced by `members`."""
    return g.length_matrix[members][:, members]


def _distances(sub: sparse.csr_matrix, sources, weighted: bool) -> np.ndarray:
    return shortest_path(
        sub,
        method="D" if weighted else "auto",
        directed=False,
        unweighted=not weighted,
        indices=sources,
    )


def _bounded_diameter(sub: sparse.csr_matrix, weighted: bool) -> tuple[float, int, int]:
    """
    Exact diameter of a connected graph from a few single-source searches,
    with a pair of local indices at that distance.

    Keeps lower/upper eccentricity bounds per node (triangle inequality
    through every searched source) and drops nodes whose upper bound cannot
    exceed the best eccentricity found so far. Sources alternate between the
    largest upper bound and the smallest lower bound.
    """
    k = sub.shape[0]
    ecc_lo = np.zeros(k)
    ecc_hi = np.full(k, np.inf)
    candidates = np.ones(k, dtype=bool)
    diam_lo, diam_hi = 0.0, np.inf
    # Partner -1: the eccentricity is known from bounds, the far node is not
    best, partner = 0, -1
    source = int(np.argmax(np.diff(sub.indptr)))
    pick_high = True

    while True:
        dist = _distances(sub, source, weighted)
        far = int(np.argmax(dist))
        ecc = float(dist[far])
        if ecc > diam_lo:
            diam_lo, best, partner = ecc, source, far
        diam_hi = min(diam_hi, 2 * ecc)
        ecc_lo = np.maximum(ecc_lo, np.maximum(dist, ecc - dist))
        ecc_hi = np.minimum(ecc_hi, ecc + dist)
        candidates[source] = False

        known = candidates & (ecc_lo == ecc_hi)
        if known.any():
            idx = np.flatnonzero(known)
            top = int(idx[np.argmax(ecc_lo[idx])])
            if ecc_lo[top] > diam_lo:
                diam_lo, best, partner = float(ecc_lo[top]), top, -1
            candidates &= ~known
        candidates &= ecc_hi > diam_lo

        if diam_lo >= diam_hi or not candidates.any():
            break

        idx = np.flatnonzero(candidates)
        source = int(idx[np.argmax(ecc_hi[idx])] if pick_high else idx[np.argmin(ecc_lo[idx])])
        pick_high = not pick_high

    if partner < 0:
        partner = int(np.argmax(_distances(sub, best, weighted)))
    return diam_lo, best, partner


def _double_sweep(sub: sparse.csr_matrix, weighted: bool) -> tuple[float, int, int]:
    first = _distances(sub, int(np.argmax(np.diff(sub.indptr))), weighted)
    start = int(np.argmax(first))
    second = _distances(sub, start, weighted)
    end = int(np.argmax(second))
    return float(second[end]), start, end


def _diameter_with_witness(
    g: Graph,
    members: np.ndarray,
    mode: DiameterMode,
    all_pairs_threshold: int,
) -> tuple[float, int, int]:
    """
    Diameter of the induced subgraph of a non-empty sorted node array, with
    two node ids at that distance ((inf, -1, -1) when disconnected).
    """
    if len(members) == 1:
        v = int(members[0])
        return 0.0, v, v

    sub = induced_lengths(g, members)
    n_components, _ = connected_components(sub, directed=False)
    if n_components > 1:
        return math.inf, -1, -1
    if mode == DiameterMode.APPROX:
        value, i, j = _double_sweep(sub, g.is_weighted)
    elif len(members) <= all_pairs_threshold:
        dist = _distances(sub, None, g.is_weighted)
        i, j = np.unravel_index(int(np.argmax(dist)), dist.shape)
        value = float(dist[i, j])
    else:
        value, i, j = _bounded_diameter(sub, g.is_weighted)
    return value, int(members[i]), int(members[j])


def cluster_diameter(
    g: Graph,
    cluster: Iterable[int] | np.ndarray,
    mode: DiameterMode = DiameterMode.EXACT,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> float:
    """
    Diameter of the subgraph induced by the cluster.

    Hop count when unweighted, sum of 1/w(e) when weighted; +inf when the
    induced subgraph is disconnected; 0 for a singleton. APPROX mode returns
    a double-sweep lower bound.

    Raises:
        EmptyClusterError: empty cluster
    """
    members = as_node_array(cluster)
    if len(members) == 0:
        raise EmptyClusterError("diameter of an empty cluster is undefined")
    return _diameter_with_witness(g, members, mode, all_pairs_threshold)[0]


def mean_eccentricity(g: Graph, cluster: Iterable[int] | np.ndarray) -> float:
    """Mean over members of their eccentricity in the induced subgraph."""
    members = as_node_array(cluster)
    if len(members) == 0:
        raise EmptyClusterError("eccentricity of an empty cluster is undefined")
    if len(members) == 1:
        return 0.0
    dist = _distances(induced_lengths(g, members), None, g.is_weighted)
    return float(dist.max(axis=1).mean())


def _path_length(
    g: Graph,
    members: np.ndarray,
    statistic: PathStatistic,
    mode: DiameterMode,
    all_pairs_threshold: int,
) -> float:
    if statistic == PathStatistic.MEAN_ECCENTRICITY:
        return mean_eccentricity(g, members)
    return cluster_diameter(g, members, mode, all_pairs_threshold)


def _compactness_value(internal_weight: float, path_length: float) -> float:
    if internal_weight == 0 or math.isinf(path_length):
        return 0.0
    return internal_weight / path_length


def compactness_cluster(
    g: Graph,
    cluster: Iterable[int] | np.ndarray,
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> float:
    """
    E(c) / diam(c), with weights summed instead of counted on weighted graphs.

    0 for edgeless clusters; 0 for disconnected ones, with a debug diagnostic.
    """
    members = as_node_array(cluster)
    if len(members) == 0:
        raise EmptyClusterError("compactness of an empty cluster is undefined")
    weight = graph_service.internal_weight(g, members)
    if weight == 0:
        return 0.0
    length = _path_length(g, members, statistic, mode, all_pairs_threshold)
    if math.isinf(length):
        logger.debug(f"Cluster of {len(members)} nodes is disconnected, compactness 0")
    return _compactness_value(weight, length)


def _per_label_counts(g: Graph, c: Clustering) -> tuple[dict[int, int], dict[int, float], dict[int, int]]:
    """Internal edge count, internal weight and volume of every cluster."""
    lu = c.labels[g.endpoints[:, 0]]
    lv = c.labels[g.endpoints[:, 1]]
    inside = lu == lv
    keys = np.array(list(c.clusters.keys()), dtype=np.int64)
    position = np.searchsorted(keys, c.labels)
    internal = np.bincount(position[g.endpoints[inside, 0]], minlength=len(keys))
    weight = np.bincount(
        position[g.endpoints[inside, 0]], weights=g.weight_array[inside], minlength=len(keys)
    )
    vol = np.bincount(position, weights=g.degrees, minlength=len(keys)).astype(np.int64)
    labels = keys.tolist()
    return (
        dict(zip(labels, internal.tolist())),
        dict(zip(labels, weight.tolist())),
        dict(zip(labels, vol.tolist())),
    )


def compactness_of_clusters(
    g: Graph,
    clusters: Iterable[np.ndarray],
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
) -> list[float]:
    """Per-cluster compactness of any collection of disjoint clusters."""
    return [compactness_cluster(g, members, mode, statistic) for members in clusters]


def compactness_clustering(
    g: Graph,
    c: Clustering,
    normalize: bool = False,
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> float:
    """
    Sum of cluster compactness values; divided by m when `normalize`.
    """
    _, weights, _ = _per_label_counts(g, c)
    values = []
    for label, members in c.clusters.items():
        if weights[label] == 0:
            continue
        length = _path_length(g, members, statistic, mode, all_pairs_threshold)
        values.append(_compactness_value(weights[label], length))
    total = math.fsum(values)
    if normalize:
        if g.m == 0:
            raise DataError("normalized compactness needs at least one edge")
        return total / g.m
    return total


def _modularity_from_totals(m: int, intra: int, sum_vol_sq: int) -> float:
    # One correctly rounded division of exact integers
    return (4 * m * intra - sum_vol_sq) / (4 * m * m)


def modularity(g: Graph, c: Clustering) -> float:
    """
    Q(C) = sum over clusters of E(c)/m - (Vol(c)/2m)^2.

    Raises:
        DataError: graph without edges
    """
    if g.m == 0:
        raise DataError("modularity is undefined on a graph without edges")
    internal, _, vol = _per_label_counts(g, c)
    intra = sum(internal.values())
    sum_vol_sq = sum(v * v for v in vol.values())
    return _modularity_from_totals(g.m, intra, sum_vol_sq)


def coverage(g: Graph, c: Clustering) -> float:
    """
    Fraction of edges inside clusters.

    Raises:
        DataError: graph without edges
    """
    if g.m == 0:
        raise DataError("coverage is undefined on a graph without edges")
    internal, _, _ = _per_label_counts(g, c)
    return sum(internal.values()) / g.m


def _conductance_value(cut: int, vol: int, m: int) -> float | None:
    denominator = min(vol, 2 * m - vol)
    if denominator == 0:
        return None
    return cut / denominator


def conductance_cluster(g: Graph, cluster: Iterable[int] | np.ndarray) -> float:
    """
    cut(c) / min(Vol(c), 2m - Vol(c)); low values mean high quality.

    Raises:
        UndefinedConductanceError: the denominator is zero
    """
    members = as_node_array(cluster)
    vol = graph_service.volume(g, members)
    value = _conductance_value(graph_service.cut_size(g, members), vol, g.m)
    if value is None:
        raise UndefinedConductanceError(
            f"conductance undefined for cluster of volume {vol} (2m = {2 * g.m})"
        )
    return value


def conductance_clustering(g: Graph, c: Clustering) -> float:
    """
    Minimum conductance over the clusters.

    Raises:
        UndefinedConductanceError: some cluster has an undefined conductance
    """
    internal, _, vol = _per_label_counts(g, c)
    best = math.inf
    for label in c.clusters:
        value = _conductance_value(vol[label] - 2 * internal[label], vol[label], g.m)
        if value is None:
            raise UndefinedConductanceError(f"conductance undefined for cluster {label}")
        best = min(best, value)
    return best


def cluster_quality(
    g: Graph,
    cluster: Iterable[int] | np.ndarray,
    label: int,
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> ClusterQuality:
    """All measurements of a single cluster."""
    members = as_node_array(cluster)
    internal = graph_service.internal_edge_count(g, members)
    weight = graph_service.internal_weight(g, members)
    vol = graph_service.volume(g, members)
    return _assemble_quality(
        g, members, label, internal, weight, vol, mode, statistic, all_pairs_threshold
    )


def _assemble_quality(
    g: Graph,
    members: np.ndarray,
    label: int,
    internal: int,
    weight: float,
    vol: int,
    mode: DiameterMode,
    statistic: PathStatistic,
    all_pairs_threshold: int,
) -> ClusterQuality:
    if len(members) == 1:
        length = 0.0
    elif internal == 0:
        length = math.inf
    else:
        length = _path_length(g, members, statistic, mode, all_pairs_threshold)
    return _quality_row(g, label, len(members), internal, weight, vol, length, mode)


def _quality_row(
    g: Graph,
    label: int,
    size: int,
    internal: int,
    weight: float,
    vol: int,
    length: float | None,
    mode: DiameterMode,
) -> ClusterQuality:
    # length None: path lengths were not tracked
    return ClusterQuality(
        cluster_label=label,
        size=size,
        internal_edges=internal,
        internal_weight=weight,
        volume=vol,
        cut=vol - 2 * internal,
        diameter=length,
        compactness=None if length is None else _compactness_value(weight, length),
        conductance=_conductance_value(vol - 2 * internal, vol, g.m),
        disconnected=length is not None and math.isinf(length),
        approximate=length is not None and mode == DiameterMode.APPROX,
    )


def clustering_report(
    g: Graph,
    c: Clustering,
    mode: DiameterMode = DiameterMode.EXACT,
    statistic: PathStatistic = PathStatistic.DIAMETER,
    all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
) -> tuple[list[ClusterQuality], ClusteringQuality]:
    """Per-cluster rows (ascending label) and the global summary of a clustering."""
    internal, weights, vol = _per_label_counts(g, c)
    rows = [
        _assemble_quality(
            g, members, label, internal[label], weights[label], vol[label],
            mode, statistic, all_pairs_threshold,
        )
        for label, members in c.clusters.items()
    ]
    total = math.fsum(row.compactness for row in rows)
    conductances = [row.conductance for row in rows if row.conductance is not None]
    undefined = len(rows) - len(conductances)
    summary = ClusteringQuality(
        n_clusters=len(rows),
        modularity=modularity(g, c) if g.m else None,
        coverage=coverage(g, c) if g.m else None,
        compactness=total,
        normalized_compactness=total / g.m if g.m else None,
        conductance=min(conductances) if conductances and not undefined else None,
        undefined_conductance=undefined,
    )
    return rows, summary


class QualityFunction(str, enum.Enum):
    """Global quality functions a dendrogram step can be ranked by."""
    MODULARITY = "modularity"
    COMPACTNESS = "compactness"
    NORMALIZED_COMPACTNESS = "normalized_compactness"


class QualityTracker:
    """
    Incremental evaluation along a dendrogram.

    Replays merge events; per merge only the merged cluster's E(c), Vol(c)
    and path length are recomputed. Sum of E(c) and sum of Vol(c)^2 are kept
    as integers so modularity is exact at every step; the compactness total
    is updated by removing the two old terms and adding the new one.

    With `paths=False` no path length is computed: merged rows carry no
    diameter or compactness and only modularity can be read.

    Exact diameters keep a pair of nodes at diameter distance per cluster.
    When at most `grow_sources` nodes join a cluster, searches from the pair's
    first node and from the joining nodes settle the new diameter: if the
    pair's distance survives, no old pair got farther apart and only paths
    touching the joining nodes can be longer.
    """

    def __init__(
        self,
        g: Graph,
        mode: DiameterMode = DiameterMode.EXACT,
        statistic: PathStatistic = PathStatistic.DIAMETER,
        all_pairs_threshold: int = DEFAULT_ALL_PAIRS_THRESHOLD,
        paths: bool = True,
        grow_sources: int = DEFAULT_GROW_SOURCES,
    ):
        self.g = g
        self.mode = mode
        self.statistic = statistic
        self.all_pairs_threshold = all_pairs_threshold
        self.paths = paths
        self.grow_sources = grow_sources
        self.step = 0
        # Event labels map to internal slots; slots own member lists (small-to-large)
        self._slot_of_node = list(range(g.n))
        self._slot_of_label = {v: v for v in range(g.n)}
        self._members: dict[int, list[int]] = {v: [v] for v in range(g.n)}
        self._internal = [0] * g.n
        self._weight = [0.0] * g.n
        self._vol = g.degrees.tolist()
        self._weights = g.weight_array.tolist()
        self._compactness = [0.0] * g.n
        self._length = [0.0] * g.n
        self._witness = [(v, v) for v in range(g.n)]
        self.intra_total = 0
        self.sum_vol_sq = sum(k * k for k in self._vol)
        self.compactness_total = 0.0

    @property
    def modularity(self) -> float:
        if self.g.m == 0:
            raise DataError("modularity is undefined on a graph without edges")
        return _modularity_from_totals(self.g.m, self.intra_total, self.sum_vol_sq)

    def value(self, function: QualityFunction) -> float:
        """Current value of a global quality function."""
        if function == QualityFunction.MODULARITY:
            return self.modularity
        if not self.paths:
            raise ContractViolation(f"{function.value} needs a tracker with path lengths")
        if function == QualityFunction.NORMALIZED_COMPACTNESS:
            if self.g.m == 0:
                raise DataError("normalized compactness needs at least one edge")
            return self.compactness_total / self.g.m
        return self.compactness_total

    def replay(self, d: Dendrogram) -> Iterator[tuple[MergeEvent, ClusterQuality]]:
        """Apply every event of `d` in order, yielding the merged cluster after each."""
        if d.n != self.g.n or self.step != 0:
            raise ContractViolation("tracker must start from singletons of the same graph")
        for event in d.events:
            yield event, self.apply(event)

    def apply(self, event: MergeEvent) -> ClusterQuality:
        """Apply one merge and return the measurements of the merged cluster."""
        a = self._slot_of_label.pop(event.absorbed_label)
        s = self._slot_of_label[event.surviving_label]
        small, large = (a, s) if len(self._members[a]) <= len(self._members[s]) else (s, a)

        # Edges between the two clusters, scanned from the smaller side
        slot_of_node = self._slot_of_node
        neighbors = self.g.neighbor_lists
        edge_ids = self.g.edge_id_lists
        weights = self._weights
        joining = self._members.pop(small)
        between, between_weight = 0, 0.0
        for v in joining:
            for u, e in zip(neighbors[v], edge_ids[v]):
                if slot_of_node[u] == large:
                    between += 1
                    between_weight += weights[e]
        for v in joining:
            slot_of_node[v] = large
        self._members[large].extend(joining)
        self._slot_of_label[event.surviving_label] = large

        self.intra_total += between
        self.sum_vol_sq += 2 * self._vol[a] * self._vol[s]
        internal = self._internal[a] + self._internal[s] + between
        weight = self._weight[a] + self._weight[s] + between_weight
        vol = self._vol[a] + self._vol[s]
        self._internal[large], self._weight[large], self._vol[large] = internal, weight, vol
        self.step = event.step

        size = len(self._members[large])
        if not self.paths:
            return _quality_row(self.g, event.surviving_label, size, internal, weight, vol, None, self.mode)

        length = self._merged_length(large, joining, internal)
        quality = _quality_row(self.g, event.surviving_label, size, internal, weight, vol, length, self.mode)
        old_terms = self._compactness[a] + self._compactness[s]
        self._compactness[small] = 0.0
        self._compactness[large] = quality.compactness
        self.compactness_total += quality.compactness - old_terms
        return quality

    def _merged_length(self, slot: int, joining: list[int], internal: int) -> float:
        members = np.array(self._members[slot], dtype=np.int64)
        members.sort()
        if internal == 0:
            self._length[slot], self._witness[slot] = math.inf, (-1, -1)
            return math.inf
        if self.statistic != PathStatistic.DIAMETER or self.mode != DiameterMode.EXACT:
            return _path_length(self.g, members, self.statistic, self.mode, self.all_pairs_threshold)

        grown = None
        if len(joining) <= self.grow_sources and not math.isinf(self._length[slot]):
            grown = self._grown_diameter(members, self._length[slot], self._witness[slot], joining)
        if grown is None:
            length, p, q = _diameter_with_witness(self.g, members, self.mode, self.all_pairs_threshold)
            grown = length, (p, q)
        self._length[slot], self._witness[slot] = grown
        return grown[0]

    def _grown_diameter(
        self,
        members: np.ndarray,
        length: float,
        witness: tuple[int, int],
        joining: list[int],
    ) -> tuple[float, tuple[int, int]] | None:
        """
        Diameter after `joining` nodes joined a cluster of known diameter
        `length` realized by `witness`; None when the witness pair got closer.
        """
        p, q = witness
        sources = np.searchsorted(members, np.array([p, *joining], dtype=np.int64))
        dist = _distances(induced_lengths(self.g, members), sources, self.g.is_weighted)
        if dist[0, np.searchsorted(members, q)] < length:
            return None
        far = dist[1:].max(axis=1)
        i = int(np.argmax(far))
        if far[i] > length:
            return float(far[i]), (joining[i], int(members[np.argmax(dist[1 + i])]))
        return length, witness


def check_axiom_properties(
    g: Graph,
    clusterings: Sequence[Clustering],
    alpha: float,
    increase_factor: float = 2.0,
    max_edges_per_cluster: int = 25,
    rel_tol: float = 1e-9,
) -> AxiomReport:
    """
    Check scale invariance, locality and monotonicity of compactness on the
    given clusterings.

    - scaling every weight by alpha multiplies each cluster's compactness by
      alpha^2 and keeps the order of the clustering totals;
    - the compactness of a union of disjoint cluster sets is the sum of the
      parts;
    - raising the weight of an intra-cluster edge never lowers that cluster's
      compactness.
    """
    report = AxiomReport(alpha=alpha)
    scaled = g.scaled(alpha)
    totals, scaled_totals = [], []

    for ci, c in enumerate(clusterings):
        clusters = list(c.clusters.values())
        base = compactness_of_clusters(g, clusters)
        after = compactness_of_clusters(scaled, clusters)

        # Scale invariance, per cluster
        for label, before_value, after_value in zip(c.clusters, base, after):
            report.scale_checks += 1
            if not math.isclose(after_value, alpha * alpha * before_value, rel_tol=rel_tol, abs_tol=1e-12):
                report.scale_violations.append(
                    f"clustering {ci} cluster {label}: {after_value} != {alpha}^2 * {before_value}"
                )
        totals.append(math.fsum(base))
        scaled_totals.append(math.fsum(after))

        # Locality: split the cluster set in two disjoint halves
        half = len(clusters) // 2
        whole = compactness_clustering(g, c)
        parts = math.fsum(base[:half]) + math.fsum(base[half:])
        report.locality_checks += 1
        if not math.isclose(whole, parts, rel_tol=1e-12, abs_tol=1e-12):
            report.locality_violations.append(f"clustering {ci}: {whole} != {parts}")
        for label, members, value in zip(c.clusters, clusters, base):
            report.locality_checks += 1
            alone = compactness_cluster(g, members)
            if alone != value:
                report.locality_violations.append(
                    f"clustering {ci} cluster {label}: value depends on other clusters"
                )

        # Monotonicity: raise intra-cluster weights one at a time
        for label, members, value in zip(c.clusters, clusters, base):
            mask = np.zeros(g.n, dtype=bool)
            mask[members] = True
            inside = np.flatnonzero(mask[g.endpoints[:, 0]] & mask[g.endpoints[:, 1]])
            for e in inside[:max_edges_per_cluster].tolist():
                raised = g.with_weight(e, g.edge_weight(e) * increase_factor)
                new_value = compactness_cluster(raised, members)
                report.monotonicity_checks += 1
                if new_value < value * (1 - 1e-12):
                    report.monotonicity_violations.append(
                        f"clustering {ci} cluster {label} edge {e}: {value} -> {new_value}"
                    )

    # Scale invariance of the ordering between clusterings
    for i, j in itertools.combinations(range(len(clusterings)), 2):
        gap = totals[i] - totals[j]
        if abs(gap) <= rel_tol * max(abs(totals[i]), abs(totals[j]), 1e-300):
            continue
        scaled_gap = scaled_totals[i] - scaled_totals[j]
        report.scale_checks += 1
        if (gap > 0) != (scaled_gap > 0):
            report.scale_violations.append(f"clusterings {i} and {j} swap order after scaling")

    if not report.ok:
        logger.warning(
            f"Axiom check found {len(report.scale_violations)} scale, "
            f"{len(report.locality_violations)} locality and "
            f"{len(report.monotonicity_violations)} monotonicity violations"
        )
    return report
