"""
Random-graph models: SBMs, correlated pairs, nominatable pairs and consistency-class graphs.
"""

from .sbm import ModelError, SbmParams, sample_sbm, sample_corr_sbm, empirical_edge_correlation
from .nominatable import NominatablePair, make_nominatable_pair, write_pair
from .consistency_class import (
    ConsistencyClassSpec,
    ConsistencyClassInstance,
    sample_consistency_class_instance,
)

__all__ = [
    'ModelError',
    'SbmParams',
    'sample_sbm',
    'sample_corr_sbm',
    'empirical_edge_correlation',
    'NominatablePair',
    'make_nominatable_pair',
    'write_pair',
    'ConsistencyClassSpec',
    'ConsistencyClassInstance',
    'sample_consistency_class_instance',
]
