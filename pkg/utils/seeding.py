"""
Seed derivation for reproducible experiments.
Every random component draws from a seed hashed out of one master seed.
"""

import hashlib
from typing import Hashable

import numpy as np

def derive_seed(master_seed: int, *components: Hashable) -> int:
    """
    Derive a 32-bit seed for a named component.

    Args:
        master_seed: The run's master seed
        components: Names and indices identifying the consumer

    Returns:
        A seed in [0, 2**32)
    """
    text = '|'.join([str(master_seed)] + [str(c) for c in components])
    digest = hashlib.sha256(text.encode('utf-8')).digest()
    return int.from_bytes(digest[:4], 'big')

def rng_for(master_seed: int, *components: Hashable) -> np.random.Generator:
    """Get a generator seeded for a named component."""
    return np.random.default_rng(derive_seed(master_seed, *components))
