"""
Spectral embedding, dimension selection and Procrustes alignment.
"""

from .spectral import (
    EmbeddingError,
    Embedding,
    DimensionChoice,
    ase,
    scree,
    elbows,
    select_dim,
    select_pair_dim,
)
from .procrustes import ProcrustesAlignment, procrustes, align

__all__ = [
    'EmbeddingError',
    'Embedding',
    'DimensionChoice',
    'ase',
    'scree',
    'elbows',
    'select_dim',
    'select_pair_dim',
    'ProcrustesAlignment',
    'procrustes',
    'align',
]
