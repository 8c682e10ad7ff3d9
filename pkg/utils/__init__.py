"""Utility modules for seeding and run tracking."""

from .seeding import derive_seed, rng_for
from .tracking import RunTracker, load_manifest

__all__ = ['derive_seed', 'rng_for', 'RunTracker', 'load_manifest']
