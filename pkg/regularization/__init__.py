"""
Trimming regularization and modularity-based parameter selection.
"""

from .trimming import RegularizationError, TrimConfig, kept_vertices, trim
from .modularity import modularity
from .sweep import DEFAULT_GRID_VALUES, SweepConfig, GridPoint, ModularityGrid, default_grid, sweep_trim_params

__all__ = [
    'RegularizationError',
    'TrimConfig',
    'kept_vertices',
    'trim',
    'modularity',
    'DEFAULT_GRID_VALUES',
    'SweepConfig',
    'GridPoint',
    'ModularityGrid',
    'default_grid',
    'sweep_trim_params',
]
