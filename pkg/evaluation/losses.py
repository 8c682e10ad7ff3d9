"""
Level-k nomination losses and the verification count.
Counterparts missing from a list (trimmed away) count as rank infinity.
"""

import logging
from dataclasses import dataclass
from typing import Hashable, Iterable, List, Optional, Sequence, Tuple

from nomination import NominationList

logger = logging.getLogger(__name__)

class EvaluationError(Exception):
    """Base exception for loss and curve computations."""
    pass

@dataclass(frozen=True)
class LossSummary:
    """Losses at one k, with the counterparts that were absent from the list."""
    k: int
    h: int
    recall_loss: float
    precision_loss: float
    missing: Tuple[Hashable, ...]

def hits_at(ranks: Iterable[Optional[int]], k: int) -> int:
    """Number of ranks at most k; None never counts."""
    return sum(1 for rank in ranks if rank is not None and rank <= k)

def _ranks(nomination_list: NominationList, counterparts: Sequence[Hashable],
           k: int) -> Tuple[List[Optional[int]], List[Hashable]]:
    counterparts = list(counterparts)
    if not counterparts:
        raise EvaluationError("At least one counterpart is required")
    m = len(nomination_list)
    if not 1 <= k <= m - 1:
        raise EvaluationError(f"k must lie in 1..{m - 1}, got {k}")
    ranks = [nomination_list.rank_of(u) for u in counterparts]
    missing = [u for u, rank in zip(counterparts, ranks) if rank is None]
    if missing:
        logger.warning(f"{len(missing)} counterparts are absent from the list and count as unranked")
    return ranks, missing

def verification_h(nomination_list: NominationList, counterparts: Sequence[Hashable], k: int) -> int:
    """
    Count the counterparts ranked within the top k.

    Raises:
        EvaluationError: If counterparts is empty or k is outside 1..m-1
    """
    ranks, _ = _ranks(nomination_list, counterparts, k)
    return hits_at(ranks, k)

def level_k_recall_loss(nomination_list: NominationList, counterparts: Sequence[Hashable], k: int) -> float:
    """1 - h / |V*|."""
    return 1.0 - verification_h(nomination_list, counterparts, k) / len(list(counterparts))

def level_k_precision_loss(nomination_list: NominationList, counterparts: Sequence[Hashable], k: int) -> float:
    """1 - h / k."""
    return 1.0 - verification_h(nomination_list, counterparts, k) / k

def loss_summary(nomination_list: NominationList, counterparts: Sequence[Hashable],
                 ks: Iterable[int]) -> List[LossSummary]:
    """Recall and precision losses at several k, flagging absent counterparts."""
    counterparts = list(counterparts)
    summaries = []
    for k in ks:
        ranks, missing = _ranks(nomination_list, counterparts, k)
        h = hits_at(ranks, k)
        summaries.append(LossSummary(k, h, 1.0 - h / len(counterparts), 1.0 - h / k, tuple(missing)))
    return summaries
