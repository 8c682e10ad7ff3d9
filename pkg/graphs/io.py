"""
Edge-list file reading and writing.
Handles the whitespace-separated `u v [w]` format with `#` comments.
"""

import logging
import os
from typing import Dict, Hashable, List, Tuple

from .graph import Graph, GraphError

logger = logging.getLogger(__name__)

class EdgeListError(GraphError):
    """Exception raised when an edge-list file is malformed."""
    pass

def load_edge_list(path: str) -> Graph:
    """
    Load a graph from an edge-list file.

    Vertex names are kept as strings in order of first appearance.

    Args:
        path: Path to a UTF-8 edge-list file

    Returns:
        The loaded graph

    Raises:
        EdgeListError: On malformed lines, self-loops or conflicting duplicates
    """
    labels: List[str] = []
    seen = set()
    weights: Dict[Tuple[str, str], float] = {}

    with open(path, 'r', encoding='utf-8') as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) not in (2, 3):
                raise EdgeListError(f"{path}:{line_number}: expected 'u v [w]', got {raw.strip()!r}")
            u, v = tokens[0], tokens[1]
            try:
                weight = float(tokens[2]) if len(tokens) == 3 else 1.0
            except ValueError:
                raise EdgeListError(f"{path}:{line_number}: weight {tokens[2]!r} is not a number") from None
            if weight < 0 or weight != weight or weight in (float('inf'), float('-inf')):
                raise EdgeListError(f"{path}:{line_number}: weight must be finite and nonnegative")
            if u == v:
                raise EdgeListError(f"{path}:{line_number}: self-loop on {u!r}")

            key = (u, v) if u <= v else (v, u)
            if key in weights and weights[key] != weight:
                raise EdgeListError(
                    f"{path}:{line_number}: duplicate edge {u}-{v} with conflicting weight "
                    f"{weight} (was {weights[key]})"
                )
            weights[key] = weight
            for name in (u, v):
                if name not in seen:
                    seen.add(name)
                    labels.append(name)

    logger.info(f"Loaded {len(labels)} vertices and {len(weights)} edges from {path}")
    return Graph.from_edges(labels, ((u, v, w) for (u, v), w in weights.items()))

def write_edge_list(g: Graph, path: str):
    """
    Write a graph as an edge list.

    Isolated vertices are not representable in the format and are dropped.

    Args:
        g: Graph to write
        path: Output path
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        for u, v, weight in g.edges():
            if weight == 1.0:
                f.write(f"{u} {v}\n")
            else:
                f.write(f"{u} {v} {weight:.10g}\n")
