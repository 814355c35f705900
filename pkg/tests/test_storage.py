import numpy as np
import pytest

from lexcluster.core.errors import DataError, ParseError
from lexcluster.models.traversal import VisitOrder
from lexcluster.storage import csv_store
from lexcluster.storage.base import file_sha256, generate_ulid


def test_cell_text():
    assert csv_store.cell(None) == ""
    assert csv_store.cell(True) == "1"
    assert csv_store.cell(0.1) == "0.1"
    assert csv_store.cell(float("inf")) == "inf"
    assert csv_store.cell(7) == "7"


def test_read_clustering_skips_header_and_comments(bridge, tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("node_id,cluster_label\n# two triangles\n0,x\n1,x\n2,x\n3,y\n4,y\n5,y\n")
    c = csv_store.read_clustering(bridge, path)
    assert c.as_sets() == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    assert c.labels.tolist() == [0, 0, 0, 3, 3, 3]


@pytest.mark.parametrize(
    "body, error, fragment",
    [
        ("0,x,extra\n", ParseError, "line 1: expected 2 fields"),
        ("zero,x\n", ParseError, "malformed node id"),
        ("0,x\n9,x\n", DataError, "node 9 is not in the graph"),
        ("0,x\n0,y\n", DataError, "node 0 is labelled twice"),
    ],
)
def test_read_clustering_errors(triangle, tmp_path, body, error, fragment):
    path = tmp_path / "c.csv"
    path.write_text(body)
    with pytest.raises(error) as info:
        csv_store.read_clustering(triangle, path)
    assert fragment in info.value.detail


def test_read_clustering_missing_file(triangle, tmp_path):
    with pytest.raises(DataError):
        csv_store.read_clustering(triangle, tmp_path / "nope.csv")


def test_visit_dump_writer(triangle, tmp_path):
    path = tmp_path / "visits.csv"
    with csv_store.VisitDumpWriter(triangle, path) as sink:
        sink(0, VisitOrder(np.array([1, 3, 2]), start=0))
        sink(1, VisitOrder(np.array([2, 1, 3]), start=1))
    lines = path.read_text().splitlines()
    assert lines[0] == "run_index,node_id,visit_iteration"
    assert lines[1:4] == ["1,0,1", "1,1,3", "1,2,2"]
    assert len(lines) == 7


def test_file_sha256(tmp_path):
    path = tmp_path / "empty"
    path.write_bytes(b"")
    assert file_sha256(path) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    with pytest.raises(DataError):
        file_sha256(tmp_path / "missing")


def test_run_ids_are_ulids():
    first, second = generate_ulid(), generate_ulid()
    assert len(first) == 26
    assert first != second
