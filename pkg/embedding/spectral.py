"""
Adjacency spectral embedding and scree-based dimension selection.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.stats import norm

from graphs import Graph

logger = logging.getLogger(__name__)

MAX_SCREE_VALUES = 100

class EmbeddingError(Exception):
    """Base exception for embedding and alignment errors."""
    pass

@dataclass(frozen=True, eq=False)
class Embedding:
    """Latent-position estimates, one row per vertex in ``vertex_order``."""
    points: np.ndarray
    vertex_order: Tuple[Hashable, ...]

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] < 1:
            raise EmbeddingError(f"Embedding needs an n x d matrix with d >= 1, got shape {points.shape}")
        if points.shape[0] != len(self.vertex_order):
            raise EmbeddingError("Row count does not match vertex_order")
        if not np.all(np.isfinite(points)):
            raise EmbeddingError("Embedding contains non-finite rows")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'vertex_order', tuple(self.vertex_order))

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def rows(self, labels: Sequence[Hashable]) -> np.ndarray:
        index = {label: i for i, label in enumerate(self.vertex_order)}
        try:
            return self.points[[index[label] for label in labels]]
        except KeyError as e:
            raise EmbeddingError(f"Vertex {e.args[0]!r} is not embedded") from None

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.points, columns=[f"x{j + 1}" for j in range(self.d)])
        frame.insert(0, 'vertex', list(self.vertex_order))
        return frame

@dataclass(frozen=True)
class DimensionChoice:
    """Chosen dimension with every elbow candidate that informed it."""
    d: int
    candidates: Dict[str, int]

def _spectrum(g: Graph) -> Tuple[np.ndarray, np.ndarray]:
    try:
        values, vectors = linalg.eigh(g.adjacency)
    except (linalg.LinAlgError, ValueError) as e:
        raise EmbeddingError(f"Eigendecomposition failed: {e}") from e
    # |eigenvalue| descending, then positive before negative, then index
    order = np.lexsort((np.arange(values.size), -np.sign(values), -np.abs(values)))
    return values[order], vectors[:, order]

def ase(g: Graph, d: int) -> Embedding:
    """
    Adjacency spectral embedding X = U |S|^(1/2) on the d largest-magnitude eigenpairs.

    Each eigenvector is sign-fixed so its largest-magnitude entry is positive.

    Args:
        g: Graph
        d: Embedding dimension, 1 <= d <= n

    Returns:
        The embedding

    Raises:
        EmbeddingError: If d is out of range or the eigensolver fails
    """
    if not 1 <= d <= g.n:
        raise EmbeddingError(f"Embedding dimension must lie in 1..{g.n}, got {d}")
    values, vectors = _spectrum(g)
    values, vectors = values[:d], vectors[:, :d].copy()
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(d)])
    signs[signs == 0] = 1.0
    vectors *= signs
    return Embedding(vectors * np.sqrt(np.abs(values)), g.labels)

def scree(g: Graph, max_values: int = MAX_SCREE_VALUES) -> np.ndarray:
    """Singular values of the adjacency matrix, descending, capped at min(n, max_values)."""
    try:
        values = np.abs(linalg.eigvalsh(g.adjacency))
    except (linalg.LinAlgError, ValueError) as e:
        raise EmbeddingError(f"Eigendecomposition failed: {e}") from e
    return np.sort(values)[::-1][:min(g.n, max_values)]

def _profile_elbow(values: np.ndarray) -> int:
    """Split point q maximizing the two-group Gaussian profile likelihood; ties go to the lowest q."""
    p = values.size
    if p < 2:
        return p
    best_q, best_ll = 1, -np.inf
    floor = np.finfo(float).tiny
    for q in range(1, p):
        head, tail = values[:q], values[q:]
        residuals = np.concatenate([head - head.mean(), tail - tail.mean()])
        variance = max(float(np.sum(residuals ** 2)) / max(p - 2, 1), floor)
        means = np.concatenate([np.full(q, head.mean()), np.full(p - q, tail.mean())])
        ll = float(norm.logpdf(values, loc=means, scale=np.sqrt(variance)).sum())
        if ll > best_ll:
            best_q, best_ll = q, ll
    return best_q

def elbows(values: Sequence[float]) -> Tuple[int, int]:
    """
    First and second profile-likelihood elbows of a descending scree.

    The second elbow is searched on the values strictly after the first and
    reported as a position in the full sequence.

    Raises:
        EmbeddingError: If fewer than 3 values are given or they are not descending
    """
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        raise EmbeddingError(f"Elbow selection needs at least 3 values, got {values.size}")
    if np.any(values < 0) or np.any(np.diff(values) > 0):
        raise EmbeddingError("Scree values must be nonnegative and descending")
    first = _profile_elbow(values)
    tail = values[first:]
    if tail.size >= 2 and np.ptp(tail) > 0:
        second = first + _profile_elbow(tail)
    else:
        second = first
    return first, second

def select_dim(values: Sequence[float]) -> int:
    """Larger of the two elbows of a descending scree."""
    first, second = elbows(values)
    return max(first, second)

def select_pair_dim(g1: Graph, g2: Graph, max_values: int = MAX_SCREE_VALUES) -> DimensionChoice:
    """
    Shared embedding dimension for a graph pair: the maximum over both graphs and both elbows.

    Returns:
        The chosen dimension and the four candidates
    """
    candidates = {}
    for name, g in (('g1', g1), ('g2', g2)):
        values = scree(g, max_values)
        # fewer than 3 values have no elbow
        first, second = elbows(values) if values.size >= 3 else (1, 1)
        candidates[f"{name}_first"] = first
        candidates[f"{name}_second"] = second
    d = min(max(candidates.values()), g1.n, g2.n)
    logger.debug(f"Elbow candidates {candidates} -> d={d}")
    return DimensionChoice(d, candidates)
