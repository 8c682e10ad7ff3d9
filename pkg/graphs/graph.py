"""
Graph representation for vertex nomination.
Handles adjacency storage, degrees, induced subgraphs and label obfuscation.
"""

import logging
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

class GraphError(Exception):
    """Base exception for graph construction and access errors."""
    pass

class UnknownVertexError(GraphError):
    """Exception raised when a vertex label is not part of the graph."""
    pass

class ObfuscationError(GraphError):
    """Exception raised when an obfuscation is not a valid bijection."""
    pass

class Graph:
    """
    Undirected, loop-free, optionally weighted graph.

    Vertices are stored as dense row indices; ``labels`` holds the external
    name of each row. Instances are immutable and safe to share.
    """

    def __init__(self, adjacency: Any, labels: Optional[Sequence[Hashable]] = None):
        """
        Initialize the graph.

        Args:
            adjacency: Square symmetric matrix of nonnegative edge weights
            labels: External vertex labels in row order (defaults to 1..n)

        Raises:
            GraphError: If the matrix is not a valid undirected simple graph
        """
        matrix = np.array(adjacency, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise GraphError(f"Adjacency must be square, got shape {matrix.shape}")
        n = matrix.shape[0]
        if not np.all(np.isfinite(matrix)):
            raise GraphError("Adjacency contains non-finite weights")
        if np.any(matrix < 0):
            raise GraphError("Adjacency contains negative weights")
        if not np.array_equal(matrix, matrix.T):
            raise GraphError("Adjacency is not symmetric")
        if np.any(np.diag(matrix) != 0):
            raise GraphError("Self-loops are not allowed")

        if labels is None:
            labels = list(range(1, n + 1))
        labels = tuple(labels)
        if len(labels) != n:
            raise GraphError(f"Expected {n} labels, got {len(labels)}")
        index = {label: i for i, label in enumerate(labels)}
        if len(index) != n:
            raise GraphError("Vertex labels must be unique")

        matrix.flags.writeable = False
        self._adjacency = matrix
        self._labels = labels
        self._index = index

    @classmethod
    def from_edges(cls, labels: Sequence[Hashable], edges: Iterable[Tuple]) -> 'Graph':
        """
        Build a graph from an edge iterable.

        Args:
            labels: Vertex labels in row order
            edges: Pairs ``(u, v)`` or triples ``(u, v, w)``

        Returns:
            The constructed graph
        """
        labels = list(labels)
        index = {label: i for i, label in enumerate(labels)}
        matrix = np.zeros((len(labels), len(labels)))
        for edge in edges:
            u, v = edge[0], edge[1]
            weight = float(edge[2]) if len(edge) > 2 else 1.0
            if u not in index or v not in index:
                missing = u if u not in index else v
                raise UnknownVertexError(f"Edge endpoint {missing!r} is not a vertex")
            if u == v:
                raise GraphError(f"Self-loop on {u!r}")
            matrix[index[u], index[v]] = weight
            matrix[index[v], index[u]] = weight
        return cls(matrix, labels)

    @classmethod
    def empty(cls, n: int) -> 'Graph':
        """Edgeless graph on labels 1..n."""
        return cls(np.zeros((n, n)))

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def labels(self) -> Tuple[Hashable, ...]:
        return self._labels

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only adjacency matrix in label order."""
        return self._adjacency

    @property
    def weighted(self) -> bool:
        return bool(np.any((self._adjacency != 0) & (self._adjacency != 1)))

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self._adjacency, k=1)))

    def __contains__(self, label: Hashable) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count}, weighted={self.weighted})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if set(self._labels) != set(other._labels):
            return False
        order = [other._index[label] for label in self._labels]
        return np.array_equal(self._adjacency, other._adjacency[np.ix_(order, order)])

    __hash__ = None

    def index_of(self, label: Hashable) -> int:
        """
        Get the row index of a vertex.

        Raises:
            UnknownVertexError: If the label is not a vertex
        """
        try:
            return self._index[label]
        except KeyError:
            raise UnknownVertexError(f"Vertex {label!r} is not in the graph") from None

    def indices_of(self, labels: Iterable[Hashable]) -> List[int]:
        return [self.index_of(label) for label in labels]

    def has_edge(self, u: Hashable, v: Hashable) -> bool:
        return self.weight(u, v) != 0

    def weight(self, u: Hashable, v: Hashable) -> float:
        return float(self._adjacency[self.index_of(u), self.index_of(v)])

    def degree(self, v: Hashable) -> float:
        """
        Get the (weighted) degree of a vertex.

        Args:
            v: Vertex label

        Returns:
            Sum of incident edge weights
        """
        return float(self._adjacency[self.index_of(v)].sum())

    def degrees(self) -> np.ndarray:
        """Degree of every vertex in label order."""
        return self._adjacency.sum(axis=1)

    def neighbors(self, v: Hashable) -> List[Hashable]:
        row = self._adjacency[self.index_of(v)]
        return [self._labels[j] for j in np.flatnonzero(row)]

    def edges(self) -> Iterator[Tuple[Hashable, Hashable, float]]:
        """Iterate over edges as ``(u, v, weight)`` with u before v in row order."""
        rows, cols = np.nonzero(np.triu(self._adjacency, k=1))
        for i, j in zip(rows, cols):
            yield self._labels[i], self._labels[j], float(self._adjacency[i, j])

    def induced_subgraph(self, vertices: Iterable[Hashable]) -> 'Graph':
        """
        Get the subgraph induced by a vertex set.

        Vertices keep their relative row order in this graph.

        Args:
            vertices: Vertex labels to keep

        Returns:
            The induced subgraph

        Raises:
            UnknownVertexError: If a label is not in the graph
        """
        keep = set(vertices)
        missing = keep.difference(self._index)
        if missing:
            raise UnknownVertexError(f"Vertices not in graph: {sorted(map(str, missing))}")
        rows = [i for i, label in enumerate(self._labels) if label in keep]
        return Graph(self._adjacency[np.ix_(rows, rows)], [self._labels[i] for i in rows])

    def relabel(self, obfuscation: 'Obfuscation') -> 'Graph':
        """
        Push every label through an obfuscation, keeping the structure.

        Args:
            obfuscation: Bijection defined on every vertex

        Returns:
            The relabeled graph

        Raises:
            ObfuscationError: If the mapping does not cover all vertices
        """
        missing = [label for label in self._labels if label not in obfuscation]
        if missing:
            raise ObfuscationError(f"Obfuscation undefined on {len(missing)} vertices, e.g. {missing[0]!r}")
        return Graph(self._adjacency, [obfuscation[label] for label in self._labels])

    def to_networkx(self):
        """Convert to a ``networkx.Graph`` with ``weight`` edge attributes."""
        import networkx as nx

        graph = nx.Graph()
        graph.add_nodes_from(self._labels)
        graph.add_weighted_edges_from(self.edges())
        return graph

class Obfuscation:
    """Bijection from a graph's labels onto a fresh label set."""

    def __init__(self, mapping: Dict[Hashable, Hashable], forbidden: Iterable[Hashable] = ()):
        """
        Initialize the obfuscation.

        Args:
            mapping: Label -> obfuscated label
            forbidden: Labels the obfuscated set must avoid (V1 and V2)

        Raises:
            ObfuscationError: If the mapping is not injective or hits a forbidden label
        """
        self._mapping = dict(mapping)
        images = set(self._mapping.values())
        if len(images) != len(self._mapping):
            raise ObfuscationError("Obfuscation is not injective")
        clash = images.intersection(forbidden)
        if clash:
            raise ObfuscationError(f"Obfuscated labels overlap vertex labels: {sorted(map(str, clash))[:5]}")
        self._inverse = {w: v for v, w in self._mapping.items()}

    @classmethod
    def fresh(cls, labels: Sequence[Hashable], rng: np.random.Generator,
              forbidden: Iterable[Hashable] = (), prefix: str = 'w') -> 'Obfuscation':
        """
        Draw a uniformly random bijection onto fresh string labels.

        Args:
            labels: Labels to obfuscate
            rng: Random generator
            forbidden: Labels that must not be produced
            prefix: Prefix of the generated labels

        Returns:
            A random obfuscation
        """
        forbidden = set(forbidden) | set(labels)
        targets = []
        counter = 0
        while len(targets) < len(labels):
            candidate = f"{prefix}{counter}"
            counter += 1
            if candidate not in forbidden:
                targets.append(candidate)
        permutation = rng.permutation(len(labels))
        return cls({label: targets[j] for label, j in zip(labels, permutation)}, forbidden)

    def __getitem__(self, label: Hashable) -> Hashable:
        try:
            return self._mapping[label]
        except KeyError:
            raise ObfuscationError(f"Obfuscation undefined on {label!r}") from None

    def __contains__(self, label: Hashable) -> bool:
        return label in self._mapping

    def __len__(self) -> int:
        return len(self._mapping)

    def items(self):
        return self._mapping.items()

    def inverse(self) -> 'Obfuscation':
        return Obfuscation(self._inverse)

    def preimage(self, label: Hashable) -> Hashable:
        try:
            return self._inverse[label]
        except KeyError:
            raise ObfuscationError(f"{label!r} is not an obfuscated label") from None
