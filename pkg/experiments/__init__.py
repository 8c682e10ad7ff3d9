"""
End-to-end experiment runs and input loading.
"""

from .data_loader import DataLoadError, load_correspondence, load_label_list, load_pair
from .experiment_manager import SELECTED_REGIME, ExperimentManager

__all__ = [
    'DataLoadError',
    'load_correspondence',
    'load_label_list',
    'load_pair',
    'SELECTED_REGIME',
    'ExperimentManager',
]
