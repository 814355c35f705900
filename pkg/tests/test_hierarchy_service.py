import numpy as np
import pytest

from lexcluster.core.errors import StepOutOfRangeError, UsageError
from lexcluster.models.dendrogram import Dendrogram, MergeEvent
from lexcluster.models.graph import Clustering
from lexcluster.models.traversal import EdgeScores
from lexcluster.services import graph_service, hierarchy_service, lexdfs_service
from lexcluster.services.quality_service import cluster_diameter
from tests.conftest import random_graph

A = frozenset({0, 1, 2})
B = frozenset({3, 4, 5})


def fixed_scores(values) -> EdgeScores:
    return EdgeScores(np.array(values, dtype=float), 1)


@pytest.fixture
def bridge_dendrogram(bridge):
    # Triangle edges score high, the bridge (edge 3) low
    return hierarchy_service.build_dendrogram(bridge, fixed_scores([0.9, 0.9, 0.9, 0.1, 0.9, 0.9, 0.9]))


def test_disjoint_set_union_by_size_with_smaller_root_on_ties():
    forest = hierarchy_service.DisjointSet(4)
    assert forest.union(2, 1) == (1, 2)
    assert forest.union(3, 2) == (1, 3)
    assert forest.union(1, 3) is None
    assert forest.labels().tolist() == [0, 1, 1, 1]


def test_bridge_dendrogram_events(bridge_dendrogram):
    events = [(e.edge, e.surviving_label, e.absorbed_label) for e in bridge_dendrogram.events]
    assert events == [(0, 0, 1), (1, 0, 2), (4, 3, 4), (5, 3, 5), (3, 0, 3)]
    assert bridge_dendrogram.edge_order.tolist() == [0, 1, 2, 4, 5, 6, 3]
    assert [e.score for e in bridge_dendrogram.events] == [0.9, 0.9, 0.9, 0.9, 0.1]


def test_clustering_at_materializes_the_two_triangles(bridge_dendrogram):
    assert hierarchy_service.clustering_at(bridge_dendrogram, 0).as_sets() == {
        frozenset({v}) for v in range(6)
    }
    four = hierarchy_service.clustering_at(bridge_dendrogram, 4)
    assert four.as_sets() == {A, B}
    assert four.labels.tolist() == [0, 0, 0, 3, 3, 3]
    assert hierarchy_service.clustering_at(bridge_dendrogram, 5).n_clusters == 1


def test_clustering_at_rejects_steps_out_of_range(bridge_dendrogram):
    with pytest.raises(StepOutOfRangeError):
        hierarchy_service.clustering_at(bridge_dendrogram, 6)
    with pytest.raises(StepOutOfRangeError):
        hierarchy_service.clustering_at(bridge_dendrogram, -1)


def test_merged_cluster_sequence(bridge_dendrogram):
    sequence = list(hierarchy_service.merged_cluster_sequence(bridge_dendrogram))
    assert sequence[1] == (2, A)
    assert sequence[3] == (4, B)
    assert sequence[4] == (5, A | B)


def test_clustering_at_score(bridge_dendrogram):
    assert hierarchy_service.clustering_at_score(bridge_dendrogram, 0.5).as_sets() == {A, B}
    assert hierarchy_service.clustering_at_score(bridge_dendrogram, 0.0).n_clusters == 1


def test_clustering_at_score_needs_descending_scores():
    d = Dendrogram(
        n=3,
        events=(MergeEvent(1, 0, 1, 0, 0.1), MergeEvent(2, 1, 2, 0, 0.3)),
        algorithm="cnm",
    )
    with pytest.raises(UsageError):
        hierarchy_service.clustering_at_score(d, 0.2)


def test_core_clusters_leave_singletons_unclassified():
    c = Clustering(np.array([0, 0, 2, 3, 3, 3]))
    cores = hierarchy_service.core_clusters(c)
    assert sorted(cores) == [0, 3]
    assert hierarchy_service.core_clusters(c, min_size=3).keys() == {3}


def test_build_dendrogram_checks_score_length(triangle):
    with pytest.raises(UsageError):
        hierarchy_service.build_dendrogram(triangle, fixed_scores([1.0]))


@pytest.mark.parametrize("graph_seed", range(30))
def test_dendrogram_invariants_on_random_graphs(graph_seed):
    g = random_graph(graph_seed)
    scores, _ = lexdfs_service.accumulate_scores(g, 5, seed=graph_seed, keep_orderings=False)
    d = hierarchy_service.build_dendrogram(g, scores)

    components = graph_service.connected_components(g)
    assert d.n_events == g.n - components.n_clusters

    for step in range(d.n_events + 1):
        c = hierarchy_service.clustering_at(d, step)
        assert c.n_clusters == g.n - step
        assert sum(len(m) for m in c.clusters.values()) == g.n
    # Each merge creates one new cluster; all of them induce connected subgraphs
    for _, members in hierarchy_service.merged_cluster_sequence(d):
        assert cluster_diameter(g, members) < np.inf


@pytest.mark.parametrize("stride", [1, 2, 3, 100])
def test_checkpoint_stride_does_not_change_clusterings(stride):
    g = random_graph(11, n=25, p=0.2)
    scores, _ = lexdfs_service.accumulate_scores(g, 3, seed=0, keep_orderings=False)
    reference = hierarchy_service.build_dendrogram(g, scores)
    strided = hierarchy_service.build_dendrogram(g, scores)
    for step in range(reference.n_events + 1):
        expected = hierarchy_service.clustering_at(reference, step)
        actual = hierarchy_service.clustering_at(strided, step, stride=stride)
        assert np.array_equal(expected.labels, actual.labels)


def test_edgeless_graph_has_no_merges():
    g = graph_service.from_edges(4, [])
    d = hierarchy_service.build_dendrogram(g, fixed_scores([]))
    assert d.n_events == 0
    assert hierarchy_service.clustering_at(d, 0).as_sets() == {frozenset({v}) for v in range(4)}


def test_triangle_closing_edge_makes_no_event(triangle):
    d = hierarchy_service.build_dendrogram(triangle, fixed_scores([0.9, 0.8, 0.7]))
    assert [(e.step, e.edge, e.surviving_label, e.absorbed_label, e.score) for e in d.events] == [
        (1, 0, 0, 1, 0.9),
        (2, 1, 0, 2, 0.8),
    ]
    assert d.edge_order.tolist() == [0, 1, 2]


def test_checkpoints_follow_the_requested_stride(monkeypatch):
    g = random_graph(11, n=25, p=0.2)
    scores, _ = lexdfs_service.accumulate_scores(g, 3, seed=0, keep_orderings=False)
    d = hierarchy_service.build_dendrogram(g, scores)
    builds = []
    original = hierarchy_service._build_checkpoints

    def counting(dendrogram, stride):
        builds.append(stride)
        return original(dendrogram, stride)

    monkeypatch.setattr(hierarchy_service, "_build_checkpoints", counting)

    hierarchy_service.clustering_at(d, d.n_events, stride=2)
    hierarchy_service.clustering_at(d, d.n_events, stride=3)
    assert builds == [2, 3]
    assert all(step % 3 == 0 for step in d.checkpoints[3])

    # a stride past the last event keeps only the singleton snapshot, built once
    wide = d.n_events + 5
    for step in range(d.n_events + 1):
        expected = hierarchy_service.clustering_at(d, step, stride=2)
        assert np.array_equal(hierarchy_service.clustering_at(d, step, stride=wide).labels, expected.labels)
    assert builds == [2, 3, wide]
    assert list(d.checkpoints[wide]) == [0]
