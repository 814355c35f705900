import math

import networkx as nx
import numpy as np
import pytest

from lexcluster.core.errors import ContractViolation, DataError, EmptyClusterError, UndefinedConductanceError
from lexcluster.models.dendrogram import Dendrogram, MergeEvent
from lexcluster.models.graph import Clustering, Graph
from lexcluster.services import hierarchy_service, lexdfs_service, quality_service
from lexcluster.services.graph_service import from_edges
from lexcluster.services.quality_service import DiameterMode, PathStatistic, QualityFunction
from tests.conftest import random_graph, random_labels

AB = Clustering(np.array([0, 0, 0, 3, 3, 3]))


def to_networkx(g: Graph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    for e, (u, v) in enumerate(g.endpoints.tolist()):
        nxg.add_edge(u, v, weight=g.edge_weight(e), length=1.0 / g.edge_weight(e))
    return nxg


def oracle_diameter(nxg: nx.Graph, members, weighted: bool) -> float:
    sub = nxg.subgraph(members)
    if len(members) == 1:
        return 0.0
    if not nx.is_connected(sub):
        return math.inf
    lengths = dict(nx.all_pairs_dijkstra_path_length(sub, weight="length" if weighted else None))
    return max(max(row.values()) for row in lengths.values())


def oracle_counts(g: Graph, members) -> tuple[int, int, int, float]:
    """(internal edges, volume, cut, internal weight) by direct enumeration."""
    inside = set(members)
    internal = cut = 0
    weight = 0.0
    for e, (u, v) in enumerate(g.endpoints.tolist()):
        if u in inside and v in inside:
            internal += 1
            weight += g.edge_weight(e)
        elif (u in inside) != (v in inside):
            cut += 1
    volume = sum(int(g.degrees[v]) for v in inside)
    return internal, volume, cut, weight


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


# Worked examples


def test_diameter_examples(path5):
    assert quality_service.cluster_diameter(path5, [3]) == 0.0
    assert quality_service.cluster_diameter(path5, range(5)) == 4.0
    heavy = from_edges(3, [(0, 1), (1, 2), (0, 2)], [2.0, 2.0, 2.0])
    assert quality_service.cluster_diameter(heavy, range(3)) == 0.5
    assert quality_service.cluster_diameter(path5, [0, 1, 3]) == math.inf
    with pytest.raises(EmptyClusterError):
        quality_service.cluster_diameter(path5, [])


def test_compactness_examples(triangle, clique4):
    assert quality_service.compactness_cluster(triangle, range(3)) == 3.0
    path3 = from_edges(3, [(0, 1), (1, 2)])
    assert quality_service.compactness_cluster(path3, range(3)) == 1.0
    assert quality_service.compactness_cluster(triangle, [1]) == 0.0
    assert quality_service.compactness_cluster(clique4, range(4)) == 6.0


def test_disconnected_cluster_has_zero_compactness(two_triangles):
    assert quality_service.compactness_cluster(two_triangles, range(6)) == 0.0


def test_clustering_compactness(two_triangles, bridge):
    assert quality_service.compactness_clustering(two_triangles, Clustering.singletons(6)) == 0.0
    assert quality_service.compactness_clustering(two_triangles, AB) == 6.0
    assert quality_service.compactness_clustering(bridge, AB) == 6.0
    assert quality_service.compactness_clustering(bridge, Clustering.whole(6)) == pytest.approx(7 / 3)
    assert quality_service.compactness_clustering(bridge, AB, normalize=True) == pytest.approx(6 / 7)


def test_modularity_examples(bridge):
    assert quality_service.modularity(bridge, Clustering.whole(6)) == 0.0
    singletons = quality_service.modularity(bridge, Clustering.singletons(6))
    assert singletons == pytest.approx(-sum((k / 14) ** 2 for k in bridge.degrees.tolist()), abs=1e-15)
    assert quality_service.modularity(bridge, AB) == pytest.approx(5 / 14, abs=1e-15)
    with pytest.raises(DataError):
        quality_service.modularity(from_edges(2, []), Clustering.whole(2))


def test_bridge_split_is_the_modularity_maximum(bridge):
    best = max(
        quality_service.modularity(bridge, Clustering.from_sets(6, partition))
        for partition in set_partitions(list(range(6)))
    )
    assert best == pytest.approx(5 / 14, abs=1e-15)
    assert quality_service.modularity(bridge, AB) == best


def test_conductance_examples(bridge, star, triangle):
    assert quality_service.conductance_cluster(bridge, [0, 1, 2]) == pytest.approx(1 / 7)
    assert quality_service.conductance_cluster(star, [1]) == 1.0
    with pytest.raises(UndefinedConductanceError):
        quality_service.conductance_cluster(bridge, range(6))
    assert quality_service.conductance_clustering(bridge, AB) == pytest.approx(1 / 7)
    assert quality_service.conductance_clustering(triangle, Clustering.singletons(3)) == 1.0
    with pytest.raises(UndefinedConductanceError):
        quality_service.conductance_clustering(bridge, Clustering.whole(6))


def test_coverage_examples(bridge):
    assert quality_service.coverage(bridge, Clustering.whole(6)) == 1.0
    assert quality_service.coverage(bridge, Clustering.singletons(6)) == 0.0
    assert quality_service.coverage(bridge, AB) == pytest.approx(6 / 7)


def test_clustering_report_on_the_bridge(bridge):
    rows, summary = quality_service.clustering_report(bridge, AB)
    assert [row.cluster_label for row in rows] == [0, 3]
    for row in rows:
        assert (row.size, row.internal_edges, row.volume, row.cut) == (3, 3, 7, 1)
        assert row.diameter == 1.0
        assert row.compactness == 3.0
        assert row.conductance == pytest.approx(1 / 7)
        assert row.cut + 2 * row.internal_edges == row.volume
    assert summary.modularity == pytest.approx(5 / 14, abs=1e-15)
    assert summary.compactness == 6.0
    assert summary.coverage == pytest.approx(6 / 7)
    assert summary.conductance == pytest.approx(1 / 7)


def test_clustering_report_marks_undefined_conductance(bridge):
    rows, summary = quality_service.clustering_report(bridge, Clustering.whole(6))
    assert rows[0].conductance is None
    assert summary.undefined_conductance == 1
    assert summary.conductance is None
    assert summary.modularity == 0.0


def test_mean_eccentricity_and_approximate_diameter(path5):
    assert quality_service.mean_eccentricity(path5, range(5)) == pytest.approx(3.2)
    assert quality_service.compactness_cluster(
        path5, range(5), statistic=PathStatistic.MEAN_ECCENTRICITY
    ) == pytest.approx(4 / 3.2)
    # Double sweep is exact on trees
    assert quality_service.cluster_diameter(path5, range(5), DiameterMode.APPROX) == 4.0


# Oracle equivalence on random graphs


@pytest.mark.parametrize("seed", range(200))
def test_quality_matches_brute_force_oracles(seed):
    weighted = seed % 2 == 1
    g = random_graph(seed, weighted=weighted)
    nxg = to_networkx(g)
    c = Clustering(random_labels(g, seed))

    intra = 0
    sum_vol_sq = 0
    total_compactness = []
    conductances = []
    for label, members in c.clusters.items():
        members = members.tolist()
        internal, volume, cut, weight = oracle_counts(g, members)
        intra += internal
        sum_vol_sq += volume * volume

        row = quality_service.cluster_quality(g, members, label)
        assert (row.internal_edges, row.volume, row.cut) == (internal, volume, cut)
        assert row.cut + 2 * row.internal_edges == row.volume

        diameter = oracle_diameter(nxg, members, weighted)
        if weighted:
            assert quality_service.cluster_diameter(g, members) == pytest.approx(diameter, rel=1e-12)
        else:
            assert quality_service.cluster_diameter(g, members) == diameter
        expected = 0.0 if internal == 0 or math.isinf(diameter) else weight / diameter
        assert quality_service.compactness_cluster(g, members) == pytest.approx(expected, rel=1e-12, abs=1e-12)
        total_compactness.append(expected)

        denominator = min(volume, 2 * g.m - volume)
        if denominator:
            conductances.append(cut / denominator)
            assert quality_service.conductance_cluster(g, members) == pytest.approx(cut / denominator, abs=1e-12)

    oracle_q = intra / g.m - sum_vol_sq / (4 * g.m * g.m)
    assert quality_service.modularity(g, c) == pytest.approx(oracle_q, abs=1e-12)
    nx_q = nx.community.modularity(nxg, [set(m.tolist()) for m in c.clusters.values()], weight=None)
    assert quality_service.modularity(g, c) == pytest.approx(nx_q, abs=1e-12)
    assert quality_service.coverage(g, c) == intra / g.m
    assert quality_service.compactness_clustering(g, c) == pytest.approx(
        math.fsum(total_compactness), rel=1e-12, abs=1e-12
    )
    if len(conductances) == c.n_clusters:
        assert quality_service.conductance_clustering(g, c) == pytest.approx(min(conductances), abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_bounded_diameter_matches_all_pairs(seed):
    g = random_graph(1000 + seed, n=50, p=0.15, weighted=seed % 2 == 1)
    members = range(g.n)
    exact = quality_service.cluster_diameter(g, members)
    bounded = quality_service.cluster_diameter(g, members, all_pairs_threshold=1)
    assert bounded == pytest.approx(exact, rel=1e-12)
    approximate = quality_service.cluster_diameter(g, members, DiameterMode.APPROX)
    assert approximate <= exact


# Axioms


def test_scale_example(triangle):
    assert quality_service.compactness_cluster(triangle.scaled(3.0), range(3)) == pytest.approx(27.0)


def test_monotonicity_example():
    path3 = from_edges(3, [(0, 1), (1, 2)])
    heavier = path3.with_weight(0, 2.0)
    assert quality_service.cluster_diameter(heavier, range(3)) == 1.5
    assert quality_service.compactness_cluster(heavier, range(3)) == 2.0


@pytest.mark.parametrize("seed", range(100))
def test_axiom_properties_on_random_weighted_graphs(seed):
    g = random_graph(5000 + seed, n=int(np.random.default_rng(seed).integers(4, 26)), weighted=True)
    clusterings = [
        Clustering(random_labels(g, seed)),
        Clustering(random_labels(g, seed + 1)),
        Clustering.whole(g.n),
    ]
    for alpha in (0.5, 2.0, 3.0):
        report = quality_service.check_axiom_properties(g, clusterings, alpha, max_edges_per_cluster=4)
        assert report.ok, report
        assert report.scale_checks > 0
        assert report.locality_checks > 0

        # argmax over the fixed clustering set survives scaling
        before = [quality_service.compactness_clustering(g, c) for c in clusterings]
        after = [quality_service.compactness_clustering(g.scaled(alpha), c) for c in clusterings]
        if sorted(before)[-1] - sorted(before)[-2] > 1e-9 * max(before):
            assert int(np.argmax(before)) == int(np.argmax(after))


def test_axiom_report_counts_monotonicity_checks(triangle):
    report = quality_service.check_axiom_properties(triangle, [Clustering.whole(3)], 2.0)
    assert report.monotonicity_checks == 3
    assert report.ok


# Incremental tracking


@pytest.mark.parametrize("seed", range(15))
def test_tracker_matches_from_scratch_evaluation(seed):
    g = random_graph(300 + seed, weighted=seed % 3 == 0)
    scores, _ = lexdfs_service.accumulate_scores(g, 3, seed=seed, keep_orderings=False)
    d = hierarchy_service.build_dendrogram(g, scores)
    tracker = quality_service.QualityTracker(g)

    assert tracker.modularity == quality_service.modularity(g, Clustering.singletons(g.n))
    for event, row in tracker.replay(d):
        c = hierarchy_service.clustering_at(d, event.step)
        assert tracker.modularity == quality_service.modularity(g, c)
        assert tracker.compactness_total == pytest.approx(
            quality_service.compactness_clustering(g, c), rel=1e-9, abs=1e-12
        )
        members = c.members(event.surviving_label)
        assert row.size == len(members)
        assert row.compactness == pytest.approx(quality_service.compactness_cluster(g, members), rel=1e-12)
    if g.m:
        assert tracker.value(QualityFunction.NORMALIZED_COMPACTNESS) == pytest.approx(
            tracker.compactness_total / g.m
        )


def chain_dendrogram(n: int) -> Dendrogram:
    """Node i joins the cluster of node 0 at step i."""
    events = tuple(MergeEvent(i, i - 1, i, 0, 1.0 / i) for i in range(1, n))
    return Dendrogram(n=n, events=events, algorithm="lexdfs")


def counting(monkeypatch, name: str) -> list[int]:
    calls = [0]
    original = getattr(quality_service, name)

    def wrapper(*args, **kwargs):
        calls[0] += 1
        return original(*args, **kwargs)

    monkeypatch.setattr(quality_service, name, wrapper)
    return calls


def test_growing_chain_needs_one_search_per_merge(monkeypatch):
    n = 1000
    g = from_edges(n, [(i, i + 1) for i in range(n - 1)])
    full = counting(monkeypatch, "_diameter_with_witness")
    searches = counting(monkeypatch, "_distances")

    tracker = quality_service.QualityTracker(g)
    diameters = [row.diameter for _, row in tracker.replay(chain_dendrogram(n))]

    assert diameters == [float(i) for i in range(1, n)]
    assert full[0] == 0
    assert searches[0] == n - 1
    assert tracker.compactness_total == pytest.approx(1.0)


def test_shortcut_falls_back_to_full_diameter(monkeypatch):
    cycle = from_edges(10, [(i, (i + 1) % 10) for i in range(10)])
    full = counting(monkeypatch, "_diameter_with_witness")
    tracker = quality_service.QualityTracker(cycle)
    diameters = [row.diameter for _, row in tracker.replay(chain_dendrogram(10))]
    # closing the cycle brings the chain ends together
    assert diameters == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 5.0]
    assert full[0] == 1


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("grow_sources", [0, 1, 16])
def test_grown_diameters_match_from_scratch(seed, grow_sources):
    g = random_graph(700 + seed, n=40, p=0.1, weighted=seed % 2 == 1)
    scores, _ = lexdfs_service.accumulate_scores(g, 2, seed=seed, keep_orderings=False)
    d = hierarchy_service.build_dendrogram(g, scores)
    tracker = quality_service.QualityTracker(g, all_pairs_threshold=8, grow_sources=grow_sources)
    for event, row in tracker.replay(d):
        members = hierarchy_service.clustering_at(d, event.step).members(event.surviving_label)
        assert row.diameter == pytest.approx(quality_service.cluster_diameter(g, members), rel=1e-12)


def test_tracker_without_paths_keeps_counts_only(monkeypatch, bridge):
    def fail(*args, **kwargs):
        raise AssertionError("path lengths computed")

    monkeypatch.setattr(quality_service, "_distances", fail)
    monkeypatch.setattr(quality_service, "_path_length", fail)
    monkeypatch.setattr(quality_service, "_diameter_with_witness", fail)

    scores, _ = lexdfs_service.accumulate_scores(bridge, 5, seed=0, keep_orderings=False)
    d = hierarchy_service.build_dendrogram(bridge, scores)
    tracker = quality_service.QualityTracker(bridge, paths=False)
    for event, row in tracker.replay(d):
        assert row.diameter is None and row.compactness is None
        c = hierarchy_service.clustering_at(d, event.step)
        assert tracker.modularity == quality_service.modularity(bridge, c)
    with pytest.raises(ContractViolation):
        tracker.value(QualityFunction.COMPACTNESS)
