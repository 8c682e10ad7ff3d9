"""
Losses, performance curves and the Monte Carlo harness.
"""

from .losses import (
    EvaluationError,
    LossSummary,
    hits_at,
    verification_h,
    level_k_recall_loss,
    level_k_precision_loss,
    loss_summary,
)
from .curves import performance_curve, loss_table
from .harness import (
    Regime,
    ReplicateResult,
    EvalReport,
    draw_seed_sets,
    monte_carlo_harness,
)
from .scenarios import SimulationScenario, regime_name, simulate_scenario, standard_regimes, loaded_regimes

__all__ = [
    'EvaluationError',
    'LossSummary',
    'hits_at',
    'verification_h',
    'level_k_recall_loss',
    'level_k_precision_loss',
    'loss_summary',
    'performance_curve',
    'loss_table',
    'Regime',
    'ReplicateResult',
    'EvalReport',
    'draw_seed_sets',
    'monte_carlo_harness',
    'SimulationScenario',
    'regime_name',
    'simulate_scenario',
    'standard_regimes',
    'loaded_regimes',
]
