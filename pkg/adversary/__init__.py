"""
Edge adversary and its block-law bookkeeping.
"""

from .contamination import (
    STRATA,
    AdversaryError,
    AdversaryConfig,
    ContaminationRecord,
    contaminate,
    contaminated_block_matrix,
    realized_block_matrix,
    stratified_densities,
    density_law_check,
    inconsistency_conditions,
)

__all__ = [
    'STRATA',
    'AdversaryError',
    'AdversaryConfig',
    'ContaminationRecord',
    'contaminate',
    'contaminated_block_matrix',
    'realized_block_matrix',
    'stratified_densities',
    'density_law_check',
    'inconsistency_conditions',
]
