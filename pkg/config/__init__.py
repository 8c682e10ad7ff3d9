"""Configuration module for vertex-nomination experiments."""

from .config_manager import ConfigError, ConfigManager, ExperimentConfig, MODES, coerce_value

__version__ = '0.1.0'

__all__ = ['ConfigError', 'ConfigManager', 'ExperimentConfig', 'MODES', 'coerce_value', '__version__']
