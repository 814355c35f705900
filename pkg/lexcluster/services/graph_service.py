"""
Graph service - edge-list ingestion and degree/volume accounting.
"""
import io
import logging
from collections.abc import Iterable
from os import PathLike
from typing import BinaryIO

import numpy as np
from scipy.sparse.csgraph import connected_components as _components

from lexcluster.core.errors import DataError, ParseError
from lexcluster.models.graph import Clustering, Graph, NodeId, as_node_array

logger = logging.getLogger(__name__)

# Published (n, m) of the datasets used in the experiments
KNOWN_DATASETS: dict[str, tuple[int, int]] = {
    "facebook": (4039, 88234),
    "astro": (18772, 198110),
    "enron": (36692, 183831),
}


def _open_source(source: BinaryIO | str | PathLike) -> BinaryIO:
    if isinstance(source, (str, PathLike)):
        try:
            return open(source, "rb")
        except OSError as e:
            raise DataError(f"cannot read {source}: {e.strerror}")
    return source


def load_edge_list(source: BinaryIO | str | PathLike, weighted: bool = False) -> Graph:
    """
    Load a SNAP-style whitespace-separated edge list.

    Lines starting with '#' are comments. Self-loops are dropped, duplicate
    pairs (either orientation) collapse to the first occurrence, and node ids
    are remapped to [0, n) in order of first appearance. With `weighted`, a
    third column holds a strictly positive weight.

    Raises:
        ParseError: malformed line (with its line number)
        DataError: unreadable or empty input
    """
    stream = _open_source(source)
    label_map: dict[int, int] = {}
    seen: set[tuple[int, int]] = set()
    pairs: list[tuple[int, int]] = []
    weights: list[float] = []
    self_loops = duplicates = 0
    expected = 3 if weighted else 2

    text = io.TextIOWrapper(stream, encoding="utf-8")
    try:
        for line_number, raw in enumerate(text, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != expected:
                raise ParseError(f"expected {expected} fields, got {len(tokens)}", line_number)
            try:
                a, b = int(tokens[0]), int(tokens[1])
                w = float(tokens[2]) if weighted else 1.0
            except ValueError:
                raise ParseError(f"malformed token in {line!r}", line_number)
            if weighted and not w > 0:
                raise ParseError(f"weight must be strictly positive, got {tokens[2]}", line_number)

            if a == b:
                self_loops += 1
                continue
            key = (a, b) if a < b else (b, a)
            if key in seen:
                duplicates += 1
                continue
            seen.add(key)

            # Remap to dense ids by first appearance
            for node in (a, b):
                if node not in label_map:
                    label_map[node] = len(label_map)
            pairs.append((label_map[a], label_map[b]))
            weights.append(w)
    except UnicodeDecodeError as e:
        raise DataError(f"input is not UTF-8 text: {e}")
    finally:
        # Leave caller-owned streams open
        if stream is source:
            text.detach()
        else:
            text.close()

    if not pairs:
        raise DataError("edge list is empty")

    node_labels = np.fromiter(label_map.keys(), dtype=np.int64, count=len(label_map))
    graph = Graph.from_simple_edges(
        len(label_map),
        np.array(pairs, dtype=np.int64),
        np.array(weights) if weighted else None,
        node_labels,
    )
    logger.info(
        f"Loaded graph n={graph.n} m={graph.m} "
        f"(dropped {self_loops} self-loops, {duplicates} duplicates)"
    )
    return graph


def from_edges(
    n: int,
    pairs: Iterable[tuple[int, int]],
    weights: Iterable[float] | None = None,
) -> Graph:
    """
    Build a graph on nodes [0, n) from in-memory pairs, applying the loader's
    simplification rules (self-loops dropped, duplicates collapsed).
    """
    pair_list = list(pairs)
    weight_list = list(weights) if weights is not None else None
    seen: set[tuple[int, int]] = set()
    kept: list[tuple[int, int]] = []
    kept_weights: list[float] = []
    for i, (a, b) in enumerate(pair_list):
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        if key in seen:
            continue
        seen.add(key)
        kept.append(key)
        if weight_list is not None:
            kept_weights.append(weight_list[i])
    return Graph.from_simple_edges(
        n,
        np.array(kept, dtype=np.int64).reshape(-1, 2),
        np.array(kept_weights) if weight_list is not None else None,
    )


def canonical_edge_list(g: Graph) -> str:
    """
    Canonical text form: one "u v" line per edge in external ids, u < v,
    sorted lexicographically (weights appended for weighted graphs).
    """
    ext = g.node_labels[g.endpoints]
    ext.sort(axis=1)
    order = np.lexsort((ext[:, 1], ext[:, 0]))
    lines = []
    for e in order.tolist():
        u, v = ext[e]
        if g.is_weighted:
            lines.append(f"{u} {v} {g.weights[e]!r}")
        else:
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n" if lines else ""


def write_edge_list(g: Graph, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(canonical_edge_list(g))


def degree(g: Graph, v: NodeId) -> int:
    """Number of edges incident to v."""
    return g.degree(v)


def volume(g: Graph, cluster: Iterable[int] | np.ndarray) -> int:
    """Sum of member degrees."""
    members = as_node_array(cluster)
    return int(g.degrees[members].sum())


def _membership(g: Graph, cluster: Iterable[int] | np.ndarray) -> np.ndarray:
    mask = np.zeros(g.n, dtype=bool)
    mask[as_node_array(cluster)] = True
    return mask


def internal_edge_count(g: Graph, cluster: Iterable[int] | np.ndarray) -> int:
    """Count of edges with both endpoints in the cluster."""
    mask = _membership(g, cluster)
    return int(np.count_nonzero(mask[g.endpoints[:, 0]] & mask[g.endpoints[:, 1]]))


def internal_weight(g: Graph, cluster: Iterable[int] | np.ndarray) -> float:
    """Sum of weights of edges inside the cluster (edge count when unweighted)."""
    mask = _membership(g, cluster)
    inside = mask[g.endpoints[:, 0]] & mask[g.endpoints[:, 1]]
    return float(g.weight_array[inside].sum())


def cut_size(g: Graph, cluster: Iterable[int] | np.ndarray) -> int:
    """Count of edges with exactly one endpoint in the cluster."""
    mask = _membership(g, cluster)
    return int(np.count_nonzero(mask[g.endpoints[:, 0]] != mask[g.endpoints[:, 1]]))


def connected_components(g: Graph) -> Clustering:
    """Connected components, each labelled by its smallest node id."""
    _, raw = _components(g.length_matrix, directed=False)
    # Relabel each component by its smallest member
    first = np.full(raw.max() + 1 if g.n else 0, g.n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(g.n, dtype=np.int64))
    return Clustering(first[raw])


def expected_dataset_size(name: str) -> tuple[int, int] | None:
    """Published (n, m) of a named dataset, None when the name is unknown."""
    return KNOWN_DATASETS.get(name.lower())


def check_dataset_size(name: str, g: Graph) -> bool:
    """Compare a loaded graph with the published size of a named dataset."""
    expected = expected_dataset_size(name)
    if expected is None:
        logger.warning(f"Unknown dataset name '{name}', size not checked")
        return False
    if (g.n, g.m) != expected:
        logger.warning(
            f"Dataset '{name}' has n={g.n} m={g.m}, expected n={expected[0]} m={expected[1]}"
        )
        return False
    return True
