"""
Degree-rank trimming of non-seed vertices.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Hashable, Iterable

import numpy as np
from scipy.stats import rankdata

from graphs import Graph

logger = logging.getLogger(__name__)

SEMANTICS = ('prose', 'literal')
RANK_DIGITS = 9

class RegularizationError(Exception):
    """Base exception for trimming and modularity errors."""
    pass

@dataclass(frozen=True)
class TrimConfig:
    """
    Fractions of non-seed vertices to trim.

    Under 'prose' semantics ``l`` trims the lowest-degree end and ``h`` the
    highest-degree end; 'literal' ranks by descending degree so ``l`` trims
    the highest-degree end.
    """
    l: float = 0.0
    h: float = 0.0
    protect: FrozenSet[Hashable] = frozenset()
    semantics: str = 'prose'

    def __post_init__(self):
        object.__setattr__(self, 'protect', frozenset(self.protect))
        if not (0.0 <= self.l < 1.0 and 0.0 <= self.h < 1.0):
            raise RegularizationError(f"l and h must lie in [0, 1), got l={self.l}, h={self.h}")
        if self.l + self.h >= 1.0:
            raise RegularizationError(f"l + h must be below 1, got {self.l + self.h}")
        if self.semantics not in SEMANTICS:
            raise RegularizationError(f"semantics must be one of {SEMANTICS}, got {self.semantics!r}")

    def with_protect(self, protect: Iterable[Hashable]) -> 'TrimConfig':
        return TrimConfig(self.l, self.h, frozenset(protect), self.semantics)

def kept_vertices(g: Graph, cfg: TrimConfig) -> FrozenSet[Hashable]:
    """
    Non-seed vertices surviving the rank filter l < rank / N <= 1 - h.

    Ties in degree share their average rank.
    """
    missing = cfg.protect.difference(g.labels)
    if missing:
        raise RegularizationError(f"Protected vertices not in graph: {sorted(map(str, missing))[:5]}")
    candidates = [label for label in g.labels if label not in cfg.protect]
    if not candidates:
        return frozenset()
    degrees = g.degrees()[g.indices_of(candidates)]
    keys = degrees if cfg.semantics == 'prose' else -degrees
    ranks = rankdata(keys, method='average')
    n = len(candidates)
    # ranks are multiples of 1/2; rounding the bounds keeps l * N and (1 - h) * N exact
    lower = round(cfg.l * n, RANK_DIGITS)
    upper = round(n - cfg.h * n, RANK_DIGITS)
    keep = (ranks > lower) & (ranks <= upper)
    return frozenset(label for label, kept in zip(candidates, keep) if kept)

def trim(g: Graph, cfg: TrimConfig) -> Graph:
    """
    Trim a graph by degree rank, always keeping the protected seeds.

    Args:
        g: Graph
        cfg: Trim settings

    Returns:
        Subgraph induced by the seeds and the kept vertices

    Raises:
        RegularizationError: If a protected vertex is not in the graph
    """
    kept = kept_vertices(g, cfg)
    trimmed = g.induced_subgraph(kept | cfg.protect)
    logger.debug(f"Trim l={cfg.l}, h={cfg.h} ({cfg.semantics}): kept {trimmed.n} of {g.n} vertices")
    return trimmed
