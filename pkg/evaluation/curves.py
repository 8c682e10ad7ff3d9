"""
Performance curves and loss tables aggregated over Monte Carlo replicates.
"""

import logging
from typing import Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from nomination import chance_curve
from .losses import EvaluationError, hits_at

logger = logging.getLogger(__name__)

RankMap = Mapping[Hashable, Optional[int]]

def _mean_se(values: np.ndarray, axis: int = 0):
    count = values.shape[axis]
    mean = values.mean(axis=axis)
    if count < 2:
        return mean, np.zeros_like(mean, dtype=float)
    return mean, values.std(axis=axis, ddof=1) / np.sqrt(count)

def performance_curve(rank_maps: Sequence[RankMap], x_max: int,
                      candidate_counts: Optional[Sequence[int]] = None) -> pd.DataFrame:
    """
    Mean and standard error of the number of counterparts ranked within the top x.

    Args:
        rank_maps: Per replicate, rank of each vertex's counterpart (None if unranked)
        x_max: Largest x
        candidate_counts: Per replicate list length m; adds chance and normalized columns

    Returns:
        DataFrame with columns x, mean, se[, chance, normalized]

    Raises:
        EvaluationError: If there are no replicates or x_max < 1
    """
    if not rank_maps:
        raise EvaluationError("performance_curve needs at least one replicate")
    if x_max < 1:
        raise EvaluationError(f"x_max must be positive, got {x_max}")

    xs = np.arange(1, x_max + 1)
    counts = np.array([[hits_at(ranks.values(), x) for x in xs] for ranks in rank_maps], dtype=float)
    mean, se = _mean_se(counts)
    frame = pd.DataFrame({'x': xs, 'mean': mean, 'se': se})

    if candidate_counts is not None:
        if len(candidate_counts) != len(rank_maps):
            raise EvaluationError("candidate_counts must have one entry per replicate")
        chance = np.mean([chance_curve(m, len(ranks), x_max)
                          for ranks, m in zip(rank_maps, candidate_counts)], axis=0)
        frame['chance'] = chance
        frame['normalized'] = np.divide(mean, chance, out=np.zeros_like(mean), where=chance > 0)
    return frame

def loss_table(rank_maps: Sequence[RankMap], candidate_counts: Sequence[int],
               ks: Iterable[int]) -> pd.DataFrame:
    """
    Mean level-k losses over replicates.

    Replicates whose list is too short for a given k (k > m - 1) are left out
    of that row.
    """
    rows = []
    for k in ks:
        hs, recall, precision = [], [], []
        for ranks, m in zip(rank_maps, candidate_counts):
            if not ranks or not 1 <= k <= m - 1:
                continue
            h = hits_at(ranks.values(), k)
            hs.append(h)
            recall.append(1.0 - h / len(ranks))
            precision.append(1.0 - h / k)
        if not hs:
            continue
        recall_mean, recall_se = _mean_se(np.array(recall))
        precision_mean, precision_se = _mean_se(np.array(precision))
        rows.append({
            'k': k,
            'h_mean': float(np.mean(hs)),
            'recall_loss': float(recall_mean),
            'recall_se': float(recall_se),
            'precision_loss': float(precision_mean),
            'precision_se': float(precision_se),
            'replicates': len(hs),
        })
    return pd.DataFrame(rows, columns=['k', 'h_mean', 'recall_loss', 'recall_se',
                                       'precision_loss', 'precision_se', 'replicates'])
