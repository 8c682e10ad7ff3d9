"""
Mixture clustering, distance scoring and nomination lists.
"""

from .gmm import NominationError, GmmError, GmmModel, DEFAULT_K_RANGE, covariance_floor, em_trace, fit_gmm
from .nominator import (
    NominationConfig,
    NominationList,
    NominationPipeline,
    FittedPipeline,
    mahalanobis_delta,
    nominate,
)
from .chance import chance_rank_distribution, chance_curve

__all__ = [
    'NominationError',
    'GmmError',
    'GmmModel',
    'DEFAULT_K_RANGE',
    'covariance_floor',
    'em_trace',
    'fit_gmm',
    'NominationConfig',
    'NominationList',
    'NominationPipeline',
    'FittedPipeline',
    'mahalanobis_delta',
    'nominate',
    'chance_rank_distribution',
    'chance_curve',
]
