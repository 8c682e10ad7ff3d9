"""
Seeded orthogonal Procrustes alignment of two embeddings.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import orthogonal_procrustes

from .spectral import Embedding, EmbeddingError

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOLERANCE = 1e-8

@dataclass(frozen=True, eq=False)
class ProcrustesAlignment:
    """Orthogonal R minimizing ||Xs - Ys R||_F and the attained residual."""
    rotation: np.ndarray
    residual: float

def procrustes(Xs: np.ndarray, Ys: np.ndarray) -> ProcrustesAlignment:
    """
    Solve the orthogonal Procrustes problem on seed rows.

    Args:
        Xs: Seed rows of the first embedding (s x d)
        Ys: Seed rows of the second embedding (s x d)

    Returns:
        The alignment

    Raises:
        EmbeddingError: On empty or mismatched inputs
    """
    Xs = np.asarray(Xs, dtype=float)
    Ys = np.asarray(Ys, dtype=float)
    if Xs.ndim != 2 or Xs.shape != Ys.shape:
        raise EmbeddingError(f"Seed matrices must share a 2-D shape, got {Xs.shape} and {Ys.shape}")
    if Xs.shape[0] < 1:
        raise EmbeddingError("Procrustes alignment needs at least one seed")
    rotation, _ = orthogonal_procrustes(Ys, Xs)
    residual = float(np.linalg.norm(Xs - Ys @ rotation))
    logger.debug(f"Procrustes on {Xs.shape[0]} seeds, d={Xs.shape[1]}: residual {residual:.6g}")
    return ProcrustesAlignment(rotation, residual)

def align(emb: Embedding, rotation: np.ndarray, tol: float = ORTHOGONALITY_TOLERANCE) -> Embedding:
    """
    Rotate an embedding by an orthogonal matrix.

    Raises:
        EmbeddingError: If the matrix is not d x d orthogonal within tol
    """
    rotation = np.asarray(rotation, dtype=float)
    if rotation.shape != (emb.d, emb.d):
        raise EmbeddingError(f"Rotation must be {emb.d}x{emb.d}, got {rotation.shape}")
    if np.linalg.norm(rotation.T @ rotation - np.eye(emb.d)) > tol:
        raise EmbeddingError("Rotation is not orthogonal")
    return Embedding(emb.points @ rotation, emb.vertex_order)
