"""
Block-and-clique graphs indexing a family of consistency classes.
Each class index i hides one Erdos-Renyi block among several, recognizable
only through how many edges its vertices send into a large clique.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from graphs import Graph
from .sbm import ModelError

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class ConsistencyClassSpec:
    """Parameters of one class instance: size n, class index i, ER probability p, list length k, |V*| = nu."""
    n: int
    i: int
    p: float
    k: int
    nu: int

    def __post_init__(self):
        if self.k < 1 or self.nu < 1:
            raise ModelError(f"k and nu must be positive, got k={self.k}, nu={self.nu}")
        if not 0.0 <= self.p <= 1.0:
            raise ModelError(f"p must lie in [0, 1], got {self.p}")
        if self.block_count < 1:
            raise ModelError(f"n={self.n} is too small for a single block of size {self.xi}")
        if not 1 <= self.i <= self.block_count:
            raise ModelError(f"class index i={self.i} must lie in 1..{self.block_count}")

    @property
    def xi(self) -> int:
        return max(self.k, self.nu)

    @property
    def block_count(self) -> int:
        return self.n // (3 * self.xi)

    @property
    def clique_size(self) -> int:
        return self.n - self.block_count * self.xi

@dataclass(frozen=True, eq=False)
class ConsistencyClassInstance:
    """A sampled graph with its ground-truth blocks and clique."""
    graph: Graph
    spec: ConsistencyClassSpec
    blocks: Dict[int, Tuple[int, ...]]
    clique: Tuple[int, ...]

    @property
    def voi(self) -> Tuple[int, ...]:
        return tuple(range(1, self.spec.nu + 1))

    @property
    def target_block(self) -> Tuple[int, ...]:
        return self.blocks[self.spec.i]

def sample_consistency_class_instance(spec: ConsistencyClassSpec, rng_seed: int) -> ConsistencyClassInstance:
    """
    Draw a graph of class i.

    Blocks occupy consecutive label ranges of size xi starting at 1, with
    block i moved to the first slot (swapping with block 1) so that the
    vertices of interest 1..nu always fall in block i. The clique holds the
    remaining labels. Each vertex of block l gets exactly l clique neighbours.

    Args:
        spec: Class parameters
        rng_seed: Seed for numpy's default generator

    Returns:
        The sampled instance
    """
    rng = np.random.default_rng(rng_seed)
    n, xi, count = spec.n, spec.xi, spec.block_count
    adjacency = np.zeros((n, n))

    slots = list(range(1, count + 1))
    slots[0], slots[spec.i - 1] = spec.i, 1
    blocks: Dict[int, Tuple[int, ...]] = {}
    for slot, block in enumerate(slots):
        start = slot * xi
        blocks[block] = tuple(range(start + 1, start + xi + 1))

    clique_rows = np.arange(count * xi, n)
    adjacency[np.ix_(clique_rows, clique_rows)] = 1.0
    np.fill_diagonal(adjacency, 0.0)

    for block, members in blocks.items():
        rows = np.array(members) - 1
        upper = np.triu(rng.random((xi, xi)) < spec.p, k=1)
        adjacency[np.ix_(rows, rows)] = (upper | upper.T)
        for row in rows:
            targets = rng.choice(clique_rows, size=block, replace=False)
            adjacency[row, targets] = 1.0
            adjacency[targets, row] = 1.0

    clique = tuple(int(r) + 1 for r in clique_rows)
    logger.debug(f"Consistency-class instance i={spec.i}: {count} blocks of {xi}, clique of {len(clique)}")
    return ConsistencyClassInstance(Graph(adjacency), spec, blocks, clique)
