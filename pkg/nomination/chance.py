"""
Chance baseline for nomination lists.
"""

import numpy as np

from .gmm import NominationError

def chance_rank_distribution(m: int, x: int) -> float:
    """
    Probability that a uniformly random order of m candidates puts a given one in the top x.

    Raises:
        NominationError: If x is outside 1..m
    """
    if not 1 <= x <= m:
        raise NominationError(f"x must lie in 1..{m}, got {x}")
    return x / m

def chance_curve(m: int, n_voi: int, x_max: int) -> np.ndarray:
    """Expected number of counterparts in the top x for x = 1..x_max; flat once x exceeds m."""
    return np.array([n_voi * chance_rank_distribution(m, min(x, m)) for x in range(1, x_max + 1)])
