"""
CSV storage for dendrograms, clusterings, quality reports and experiment
series.

Node ids are written as the external ids of the input file. Floats use repr
so a fixed seed yields byte-identical files; undefined values are empty cells.
"""
import csv
import logging
from collections.abc import Iterable, Sequence
from os import PathLike
from pathlib import Path

import numpy as np

from lexcluster.core.errors import DataError, ParseError
from lexcluster.models.dendrogram import Dendrogram
from lexcluster.models.graph import Clustering, Graph
from lexcluster.models.traversal import VisitOrder
from lexcluster.schemas.experiment import (
    ClusterProfilePoint,
    ConvergenceSeries,
    EnvelopePoint,
    TracePoint,
)
from lexcluster.schemas.quality import ClusterQuality, ClusteringQuality

logger = logging.getLogger(__name__)

DENDROGRAM_HEADER = ["step", "edge_u", "edge_v", "absorbed", "surviving", "score"]
CLUSTERING_HEADER = ["node_id", "cluster_label"]
QUALITY_HEADER = [
    "cluster_label", "size", "internal_edges", "volume", "cut",
    "diameter", "compactness", "conductance", "disconnected", "approximate",
]
TRACE_HEADER = ["algorithm", "step", "modularity", "compactness"]
ENVELOPE_HEADER = [
    "algorithm", "step",
    "modularity_min", "modularity_mean", "modularity_max",
    "compactness_min", "compactness_mean", "compactness_max",
]
PROFILE_HEADER = ["algorithm", "step", "size", "conductance", "compactness"]
CONVERGENCE_HEADER = ["run_index", "window_token", "w", "c_i"]
VISITS_HEADER = ["run_index", "node_id", "visit_iteration"]


def cell(value) -> str:
    """Deterministic text form of one CSV value."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(path: str | PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write a header and rows; returns the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell(value) for value in row])
            count += 1
    logger.info(f"Wrote {count} row(s) to {path}")
    return path


def write_dendrogram(g: Graph, d: Dendrogram, path: str | PathLike) -> Path:
    ext = g.node_labels.tolist()
    endpoints = g.endpoints.tolist()
    return write_rows(path, DENDROGRAM_HEADER, (
        (
            event.step,
            ext[endpoints[event.edge][0]],
            ext[endpoints[event.edge][1]],
            ext[event.absorbed_label],
            ext[event.surviving_label],
            float(event.score),
        )
        for event in d.events
    ))


def write_clustering(g: Graph, c: Clustering, path: str | PathLike) -> Path:
    ext = g.node_labels.tolist()
    labels = c.labels.tolist()
    return write_rows(path, CLUSTERING_HEADER, ((ext[v], ext[labels[v]]) for v in range(g.n)))


def read_clustering(g: Graph, path: str | PathLike) -> Clustering:
    """
    Read a node_id,cluster_label file written in external node ids.

    Raises:
        ParseError: malformed row
        DataError: unknown node, duplicate node, or nodes left unlabelled
    """
    index = {label: v for v, label in enumerate(g.node_labels.tolist())}
    groups: dict[str, list[int]] = {}
    assigned = np.zeros(g.n, dtype=bool)
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            for line_number, row in enumerate(reader, start=1):
                if not row or row[0].startswith("#") or row == CLUSTERING_HEADER:
                    continue
                if len(row) != 2:
                    raise ParseError(f"expected 2 fields, got {len(row)}", line_number)
                try:
                    node = int(row[0])
                except ValueError:
                    raise ParseError(f"malformed node id {row[0]!r}", line_number)
                if node not in index:
                    raise DataError(f"line {line_number}: node {node} is not in the graph")
                v = index[node]
                if assigned[v]:
                    raise DataError(f"line {line_number}: node {node} is labelled twice")
                assigned[v] = True
                groups.setdefault(row[1].strip(), []).append(v)
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}")

    missing = np.flatnonzero(~assigned)
    if len(missing):
        shown = ", ".join(str(x) for x in g.node_labels[missing[:10]].tolist())
        more = f" and {len(missing) - 10} more" if len(missing) > 10 else ""
        raise DataError(f"{len(missing)} node(s) have no cluster label: {shown}{more}")
    return Clustering.from_sets(g.n, groups.values())


def write_quality(
    g: Graph,
    rows: Iterable[ClusterQuality],
    summary: ClusteringQuality,
    cluster_path: str | PathLike,
    global_path: str | PathLike,
) -> list[Path]:
    ext = g.node_labels.tolist()
    written = [write_rows(cluster_path, QUALITY_HEADER, (
        (
            ext[row.cluster_label], row.size, row.internal_edges, row.volume, row.cut,
            row.diameter, row.compactness, row.conductance, row.disconnected, row.approximate,
        )
        for row in rows
    ))]
    written.append(write_rows(global_path, ["metric", "value"], summary.model_dump().items()))
    return written


def write_trace(trace: Iterable[TracePoint], path: str | PathLike) -> Path:
    return write_rows(path, TRACE_HEADER, (
        (p.algorithm, p.step, p.modularity, p.compactness) for p in trace
    ))


def write_envelope(envelope: Iterable[EnvelopePoint], path: str | PathLike) -> Path:
    return write_rows(path, ENVELOPE_HEADER, (
        (
            p.algorithm, p.step,
            p.modularity_min, p.modularity_mean, p.modularity_max,
            p.compactness_min, p.compactness_mean, p.compactness_max,
        )
        for p in envelope
    ))


def write_profile(points: Iterable[ClusterProfilePoint], path: str | PathLike) -> Path:
    return write_rows(path, PROFILE_HEADER, (
        (p.algorithm, p.step, p.size, p.conductance, p.compactness) for p in points
    ))


def write_convergence(series: Iterable[ConvergenceSeries], path: str | PathLike) -> Path:
    return write_rows(path, CONVERGENCE_HEADER, (
        (run, s.window_token, s.window, value)
        for s in series
        for run, value in zip(s.run_indices, s.values)
    ))


class VisitDumpWriter:
    """Streams per-run visit orders to a CSV as the runs complete."""

    def __init__(self, g: Graph, path: str | PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._labels = g.node_labels.tolist()
        self._file = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file, lineterminator="\n")
        self._writer.writerow(VISITS_HEADER)

    def __call__(self, run_index: int, order: VisitOrder) -> None:
        for v, visited in enumerate(order.visited.tolist()):
            self._writer.writerow([run_index + 1, self._labels[v], visited])

    def close(self) -> None:
        self._file.close()

    def __enter__(self) -> "VisitDumpWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
