"""
Newman modularity of a vertex clustering.
"""

from typing import Hashable, Mapping, Sequence, Union

import numpy as np

from graphs import Graph
from .trimming import RegularizationError

Clustering = Union[Mapping[Hashable, Hashable], Sequence[Hashable], np.ndarray]

def _cluster_labels(g: Graph, clustering: Clustering) -> list:
    if isinstance(clustering, Mapping):
        try:
            return [clustering[label] for label in g.labels]
        except KeyError as e:
            raise RegularizationError(f"Clustering misses vertex {e.args[0]!r}") from None
    labels = list(clustering)
    if len(labels) != g.n:
        raise RegularizationError(f"Clustering has {len(labels)} entries for {g.n} vertices")
    return labels

def modularity(g: Graph, clustering: Clustering) -> float:
    """
    Q = (1/2|E|) sum_ij [A_ij - d_i d_j / 2|E|] 1{c_i = c_j} with weighted A and degrees.

    Args:
        g: Graph with at least one edge
        clustering: Cluster per vertex, as a mapping or in label order

    Returns:
        The modularity

    Raises:
        RegularizationError: If the graph has no edges
    """
    labels = _cluster_labels(g, clustering)
    A = g.adjacency
    degrees = A.sum(axis=1)
    two_m = float(degrees.sum())
    if two_m == 0:
        raise RegularizationError("Modularity is undefined on an edgeless graph")

    _, codes = np.unique(np.array([str(c) for c in labels]), return_inverse=True)
    H = np.zeros((g.n, codes.max() + 1 if g.n else 0))
    H[np.arange(g.n), codes] = 1.0
    within = float(np.trace(H.T @ A @ H))
    cluster_degrees = H.T @ degrees
    return (within - float(cluster_degrees @ cluster_degrees) / two_m) / two_m
