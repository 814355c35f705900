import argparse
import logging
import os
import sys
import tempfile

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lexcluster.services import graph_service
from lexcluster.storage.base import file_sha256

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def check_dataset(path: str, name: str | None) -> bool:
    logger.info(f"Checking {path}...")
    logger.info(f"sha256: {file_sha256(path)}")
    g = graph_service.load_edge_list(path)
    logger.info(f"Loaded n={g.n} m={g.m}")

    ok = True
    if name:
        expected = graph_service.expected_dataset_size(name)
        if expected is None:
            logger.error(f"Unknown dataset '{name}'")
            ok = False
        elif not graph_service.check_dataset_size(name, g):
            ok = False
        else:
            logger.info(f"Size matches the published '{name}' dataset")

    # Canonical form must reload to the same graph
    with tempfile.TemporaryDirectory() as tmp:
        canonical = os.path.join(tmp, "canonical.txt")
        graph_service.write_edge_list(g, canonical)
        again = graph_service.load_edge_list(canonical)
    if graph_service.canonical_edge_list(again) != graph_service.canonical_edge_list(g):
        logger.error("Canonical edge list does not reload to the same graph")
        ok = False
    else:
        logger.info("Canonical edge list round-trips")

    components = graph_service.connected_components(g)
    logger.info(f"{components.n_clusters} connected component(s)")
    return ok


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Sanity-check an edge-list dataset")
    parser.add_argument("path")
    parser.add_argument("--dataset", help="facebook, astro or enron")
    args = parser.parse_args()
    sys.exit(0 if check_dataset(args.path, args.dataset) else 1)
