"""
Exact Bayes-optimal nomination on tiny graph pairs and the block-identifying scheme.
"""

from .enumeration import (
    MAX_ORACLE_VERTICES,
    OracleError,
    OracleSpec,
    SupportPair,
    EnumeratedDistribution,
    IsoClass,
    IsoClassPartition,
    enumerate_support,
    partition_by_isomorphism,
    class_lookup,
)
from .bayes import (
    LOSS_KINDS,
    ClassScheme,
    ExactScheme,
    OptimalityReport,
    bayes_optimal_scheme,
    random_consistent_scheme,
    exact_loss,
    verify_optimality,
    oracle_report,
)
from .psi import (
    PsiIdentificationError,
    PsiMonteCarloResult,
    identify_blocks,
    psi_block_identifier,
    psi_monte_carlo,
)

__all__ = [
    'MAX_ORACLE_VERTICES',
    'OracleError',
    'OracleSpec',
    'SupportPair',
    'EnumeratedDistribution',
    'IsoClass',
    'IsoClassPartition',
    'enumerate_support',
    'partition_by_isomorphism',
    'class_lookup',
    'LOSS_KINDS',
    'ClassScheme',
    'ExactScheme',
    'OptimalityReport',
    'bayes_optimal_scheme',
    'random_consistent_scheme',
    'exact_loss',
    'verify_optimality',
    'oracle_report',
    'PsiIdentificationError',
    'PsiMonteCarloResult',
    'identify_blocks',
    'psi_block_identifier',
    'psi_monte_carlo',
]
