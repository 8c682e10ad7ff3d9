"""
Modularity-driven selection of trimming parameters.
Each grid point is trimmed, embedded, clustered and scored by the
modularity of the clustering, averaged over seed sets.
"""

import logging
from dataclasses import dataclass
from typing import Collection, Hashable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from embedding import EmbeddingError, ase, select_dim, scree
from graphs import Graph
from nomination import DEFAULT_K_RANGE, NominationError, fit_gmm
from .modularity import modularity
from .trimming import RegularizationError, TrimConfig, trim

logger = logging.getLogger(__name__)

DEFAULT_GRID_VALUES = (0.0, 0.05, 0.1, 0.15, 0.2, 0.25)

@dataclass(frozen=True)
class SweepConfig:
    """Embedding and clustering settings used at every grid point."""
    d: Optional[int] = None
    k_range: Tuple[int, ...] = DEFAULT_K_RANGE
    n_init: int = 5
    semantics: str = 'prose'
    random_state: int = 0
    n_jobs: int = 1

@dataclass(frozen=True)
class GridPoint:
    l: float
    h: float
    mean_q: float
    se_q: float
    valid: bool
    reps: int

@dataclass(frozen=True)
class ModularityGrid:
    """Mean modularity per (l, h) and the selected point."""
    entries: Tuple[GridPoint, ...]

    @property
    def argmax(self) -> Tuple[float, float]:
        """Highest mean Q among valid points; ties go to smaller l + h, then smaller l."""
        valid = [e for e in self.entries if e.valid]
        if not valid:
            raise RegularizationError("No valid grid point to select")
        best = min(valid, key=lambda e: (-e.mean_q, e.l + e.h, e.l))
        return best.l, best.h

    def entry(self, l: float, h: float) -> GridPoint:
        for e in self.entries:
            if np.isclose(e.l, l) and np.isclose(e.h, h):
                return e
        raise RegularizationError(f"Grid has no point ({l}, {h})")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {'l': e.l, 'h': e.h, 'mean_q': e.mean_q, 'se_q': e.se_q, 'valid': e.valid}
            for e in self.entries
        ])

def default_grid(values: Sequence[float] = DEFAULT_GRID_VALUES) -> List[Tuple[float, float]]:
    """Full (l, h) product of the values, skipping l + h >= 1."""
    return [(l, h) for l in values for h in values if l + h < 1.0]

def _grid_point_q(g: Graph, l: float, h: float, seeds: Collection[Hashable],
                  cfg: SweepConfig) -> Optional[float]:
    trimmed = trim(g, TrimConfig(l, h, frozenset(seeds), cfg.semantics))
    if trimmed.n < 3 or trimmed.edge_count == 0:
        return None
    try:
        d = cfg.d if cfg.d is not None else select_dim(scree(trimmed))
        embedding = ase(trimmed, min(d, trimmed.n))
        gmm = fit_gmm(embedding.points, k_range=cfg.k_range, n_init=cfg.n_init,
                      random_state=cfg.random_state)
    except (EmbeddingError, NominationError) as e:
        logger.warning(f"Grid point ({l}, {h}) failed: {e}")
        return None
    return modularity(trimmed, gmm.assignment)

def sweep_trim_params(g: Graph, grid: Sequence[Tuple[float, float]],
                      seed_sets: Sequence[Collection[Hashable]],
                      cfg: Optional[SweepConfig] = None) -> ModularityGrid:
    """
    Evaluate clustering modularity over a grid of trimming parameters.

    Args:
        g: Graph to trim (typically the contaminated second graph)
        grid: (l, h) points
        seed_sets: One protected seed set per replicate
        cfg: Embedding and clustering settings

    Returns:
        The modularity grid; points where any replicate yields an empty or
        edgeless graph are marked invalid

    Raises:
        RegularizationError: On an empty grid or no seed sets
    """
    cfg = cfg or SweepConfig()
    if not grid:
        raise RegularizationError("The trimming grid is empty")
    if not seed_sets:
        raise RegularizationError("At least one seed set is required")

    jobs = [(l, h, r) for l, h in grid for r in range(len(seed_sets))]
    values = Parallel(n_jobs=cfg.n_jobs, prefer='threads')(
        delayed(_grid_point_q)(g, l, h, seed_sets[r], cfg) for l, h, r in jobs
    )

    reps = len(seed_sets)
    entries = []
    for i, (l, h) in enumerate(grid):
        qs = values[i * reps:(i + 1) * reps]
        if any(q is None for q in qs):
            logger.warning(f"Grid point ({l}, {h}) marked invalid")
            entries.append(GridPoint(l, h, float('nan'), float('nan'), False, reps))
            continue
        qs = np.array(qs)
        se = float(qs.std(ddof=1) / np.sqrt(reps)) if reps > 1 else 0.0
        entries.append(GridPoint(l, h, float(qs.mean()), se, True, reps))

    result = ModularityGrid(tuple(entries))
    if any(e.valid for e in entries):
        logger.info(f"Modularity sweep over {len(grid)} points x {reps} seed sets: argmax {result.argmax}")
    else:
        logger.warning(f"Modularity sweep over {len(grid)} points found no valid point")
    return result
