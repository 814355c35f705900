"""
LexDFS service - lexicographic depth-first traversal and visit-time edge scores.

Each visit prepends the current iteration to the label of every unvisited
neighbour; the neighbour with the highest label is visited next.
"""
import logging
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from lexcluster.core.errors import ContractViolation, UsageError
from lexcluster.models.graph import EdgeId, Graph, NodeId
from lexcluster.models.traversal import EdgeScores, LexLabel, VisitOrder

logger = logging.getLogger(__name__)

RunSeed = int | np.random.SeedSequence


def _check_label(label: LexLabel, node: NodeId) -> None:
    if len(label) > 1 and label[0] <= label[1]:
        raise ContractViolation(f"label of node {node} is not strictly decreasing: {label}")


def lexdfs_run(
    g: Graph,
    start: NodeId,
    rng: np.random.Generator,
    debug: bool = False,
) -> VisitOrder:
    """
    Run one LexDFS traversal from `start`.

    The pending nodes live in an insertion-ordered dict used as a stack:
    push, pop-from-top and removal of a known node are all O(1). Equal labels
    are ordered uniformly at random. When the stack empties before every node
    is visited, the traversal restarts from a uniformly random unvisited node
    and the iteration counter keeps counting.
    """
    n = g.n
    if not 0 <= start < n:
        raise UsageError(f"start node {start} outside [0, {n})")

    neighbors = g.neighbor_lists
    visited = [0] * n
    labels: list[LexLabel] = [[] for _ in range(n)]
    stack: dict[NodeId, None] = {start: None}
    restart_order: list[int] | None = None
    cursor = 0
    restarts = 0
    i = 1

    while True:
        while stack:
            node, _ = stack.popitem()
            visited[node] = i

            pending = []
            for v in neighbors[node]:
                if visited[v] == 0:
                    stack.pop(v, None)
                    labels[v].insert(0, i)
                    if debug:
                        _check_label(labels[v], v)
                    pending.append(v)

            if len(pending) > 1:
                ties = rng.random(len(pending)).tolist()
                ranked = sorted(range(len(pending)), key=lambda k: (labels[pending[k]], ties[k]))
                pending = [pending[k] for k in ranked]

            # Ascending push leaves the highest label on top
            for v in pending:
                stack[v] = None
            i += 1

        if i > n:
            break

        # Disconnected graph: jump to a random unvisited node
        if restart_order is None:
            restart_order = rng.permutation(n).tolist()
        while visited[restart_order[cursor]]:
            cursor += 1
        stack[restart_order[cursor]] = None
        restarts += 1

    if restarts:
        logger.debug(f"LexDFS from {start} restarted {restarts} time(s)")
    return VisitOrder(np.array(visited, dtype=np.int64), start, restarts)


def score_edge(g: Graph, order: VisitOrder, e: EdgeId) -> float:
    """
    Visit-time score 1 - |u.visited - v.visited| / m of one edge.

    Raises:
        ContractViolation: an endpoint was never visited
    """
    u, v = g.endpoints[e]
    tu, tv = int(order.visited[u]), int(order.visited[v])
    if tu == 0 or tv == 0:
        raise ContractViolation(f"edge {e} has an unvisited endpoint")
    return 1.0 - abs(tu - tv) / g.m


def score_edges(g: Graph, order: VisitOrder) -> np.ndarray:
    """Vectorized score_edge over every edge."""
    tu = order.visited[g.endpoints[:, 0]]
    tv = order.visited[g.endpoints[:, 1]]
    if np.any(tu == 0) or np.any(tv == 0):
        raise ContractViolation("scores requested for an incomplete traversal")
    return 1.0 - np.abs(tu - tv) / g.m


def edge_ranking(mean: np.ndarray) -> np.ndarray:
    """
    Rank o(e) in 1..m of every edge: descending score, ties by ascending edge id.
    """
    m = len(mean)
    order = np.lexsort((np.arange(m), -mean))
    ranks = np.empty(m, dtype=np.int64)
    ranks[order] = np.arange(1, m + 1, dtype=np.int64)
    return ranks


def descending_edge_order(mean: np.ndarray) -> np.ndarray:
    """Edge ids sorted by descending score, ties by ascending edge id."""
    return np.lexsort((np.arange(len(mean)), -mean))


def kept_run_indices(l: int, ordering_stride: int = 1) -> list[int]:
    """1-based indices of the runs whose edge ranking is kept (the last run always is)."""
    return [i + 1 for i in range(l) if i % ordering_stride == 0 or i == l - 1]


def _traverse(g: Graph, seed: np.random.SeedSequence, debug: bool) -> VisitOrder:
    rng = np.random.default_rng(seed)
    start = int(rng.integers(g.n))
    return lexdfs_run(g, start, rng, debug=debug)


# Worker-process state, set once per process by the pool initializer
_worker_graph: Graph | None = None


def _init_worker(g: Graph) -> None:
    global _worker_graph
    _worker_graph = g


def _traverse_in_worker(seed: np.random.SeedSequence, debug: bool) -> VisitOrder:
    return _traverse(_worker_graph, seed, debug)


def accumulate_scores(
    g: Graph,
    l: int,
    seed: RunSeed,
    workers: int = 1,
    keep_orderings: bool = True,
    ordering_stride: int = 1,
    debug: bool = False,
    visit_sink: Callable[[int, VisitOrder], None] | None = None,
) -> tuple[EdgeScores, list[np.ndarray]]:
    """
    Run `l` LexDFS traversals from uniformly random start nodes and keep the
    running mean of every edge score.

    Every run draws from its own child stream of `seed`, so results do not
    depend on `workers`; the mean is folded in run-index order.

    Args:
        g: Graph to traverse
        l: Number of runs (>= 1)
        seed: Root seed or SeedSequence
        workers: Process count for the traversals
        keep_orderings: Record the ranking o_i after each run
        ordering_stride: Keep only every stride-th ranking (bounds memory for large l)
        debug: Check label invariants during the traversal
        visit_sink: Called with (run_index, VisitOrder) after every run

    Returns:
        (EdgeScores, rankings) where rankings[i] maps edge id -> rank in 1..m

    Raises:
        UsageError: l < 1 or empty graph
    """
    if l < 1:
        raise UsageError(f"run count must be >= 1, got {l}")
    if ordering_stride < 1:
        raise UsageError(f"ordering stride must be >= 1, got {ordering_stride}")
    if g.n == 0:
        raise UsageError("cannot traverse an empty graph")

    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(l)
    scores = EdgeScores.empty(g.m)
    orderings: list[np.ndarray] = []
    started = time.perf_counter()

    def fold(index: int, order: VisitOrder) -> None:
        nonlocal scores
        scores = scores.updated(score_edges(g, order))
        if keep_orderings and (index % ordering_stride == 0 or index == l - 1):
            orderings.append(edge_ranking(scores.mean))
        if visit_sink is not None:
            visit_sink(index, order)
        logger.debug(f"LexDFS run {index + 1}/{l} done (start={order.start})")

    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(g,)
        ) as pool:
            # map() yields in submission order, keeping the fold deterministic
            for index, order in enumerate(pool.map(_traverse_in_worker, children, [debug] * l)):
                fold(index, order)
    else:
        for index, child in enumerate(children):
            fold(index, _traverse(g, child, debug))

    logger.info(f"Accumulated {l} LexDFS runs in {time.perf_counter() - started:.2f}s")
    return scores, orderings
