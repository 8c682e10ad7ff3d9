"""
Stochastic blockmodel generators.
Handles single SBM draws, rho-correlated SBM pairs and edgewise correlation estimates.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from graphs import Graph

logger = logging.getLogger(__name__)

class ModelError(Exception):
    """Base exception for random-graph model errors."""
    pass

@dataclass(frozen=True, eq=False)
class SbmParams:
    """Stochastic blockmodel parameters (n, B, pi); K is implied by B."""
    n: int
    B: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        B = np.array(self.B, dtype=float)
        pi = np.array(self.pi, dtype=float)
        object.__setattr__(self, 'B', B)
        object.__setattr__(self, 'pi', pi)
        if self.n < 0:
            raise ModelError(f"n must be nonnegative, got {self.n}")
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise ModelError(f"B must be square, got shape {B.shape}")
        if not np.array_equal(B, B.T):
            raise ModelError("B must be symmetric")
        if np.any(B < 0) or np.any(B > 1):
            raise ModelError("B entries must lie in [0, 1]")
        if pi.shape != (B.shape[0],):
            raise ModelError(f"pi must have length {B.shape[0]}, got {pi.shape}")
        if np.any(pi < 0) or abs(pi.sum() - 1.0) > 1e-12:
            raise ModelError(f"pi must be a probability vector, got {pi.tolist()}")

    @property
    def K(self) -> int:
        return self.B.shape[0]

    def edge_probabilities(self, blocks: np.ndarray) -> np.ndarray:
        """Pairwise edge probability matrix for a block assignment."""
        return self.B[np.ix_(blocks, blocks)]

def _sample_blocks(params: SbmParams, rng: np.random.Generator) -> np.ndarray:
    return rng.choice(params.K, size=params.n, p=params.pi)

def _symmetric_draw(probabilities: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = probabilities.shape[0]
    upper = np.triu(rng.random((n, n)) < probabilities, k=1)
    return (upper | upper.T).astype(float)

def sample_sbm(params: SbmParams, rng_seed: int) -> Tuple[Graph, np.ndarray]:
    """
    Draw a graph from a stochastic blockmodel.

    Args:
        params: Model parameters
        rng_seed: Seed for numpy's default generator

    Returns:
        The graph on labels 1..n and the block of each vertex (0-based)
    """
    rng = np.random.default_rng(rng_seed)
    blocks = _sample_blocks(params, rng)
    adjacency = _symmetric_draw(params.edge_probabilities(blocks), rng)
    return Graph(adjacency), blocks

def sample_corr_sbm(rho: float, params: SbmParams, rng_seed: int,
                    first: str = 'g1') -> Tuple[Graph, Graph, np.ndarray]:
    """
    Draw a rho-correlated SBM pair sharing one block assignment.

    The second graph is drawn edgewise conditional on the first with
    P(1|1) = B + rho(1-B) and P(1|0) = B(1-rho).

    Args:
        rho: Edgewise indicator correlation in [0, 1]
        params: Model parameters
        rng_seed: Seed for numpy's default generator
        first: Which graph of the returned pair is drawn unconditionally ('g1' or 'g2')

    Returns:
        (G1, G2, blocks)

    Raises:
        ModelError: If rho is out of range
    """
    if not 0.0 <= rho <= 1.0:
        raise ModelError(f"rho must lie in [0, 1], got {rho}")
    if first not in ('g1', 'g2'):
        raise ModelError(f"first must be 'g1' or 'g2', got {first!r}")

    rng = np.random.default_rng(rng_seed)
    blocks = _sample_blocks(params, rng)
    P = params.edge_probabilities(blocks)
    base = _symmetric_draw(P, rng)
    conditional = np.where(base == 1, P + rho * (1 - P), P * (1 - rho))
    other = _symmetric_draw(conditional, rng)

    if first == 'g1':
        return Graph(base), Graph(other), blocks
    return Graph(other), Graph(base), blocks

def empirical_edge_correlation(g1: Graph, g2: Graph, params: SbmParams,
                               blocks: np.ndarray) -> Tuple[float, float]:
    """
    Estimate the edgewise indicator correlation of a correlated pair.

    Indicators are standardized by their true block probability so that
    differing block rates do not inflate the estimate. Pairs with
    degenerate probability (0 or 1) carry no information and are skipped.

    Returns:
        (estimate, standard error)
    """
    P = params.edge_probabilities(blocks)
    rows, cols = np.triu_indices(g1.n, k=1)
    p = P[rows, cols]
    informative = (p > 0) & (p < 1)
    if not np.any(informative):
        raise ModelError("No vertex pair has a nondegenerate edge probability")
    p = p[informative]
    scale = np.sqrt(p * (1 - p))
    z1 = (g1.adjacency[rows, cols][informative] - p) / scale
    z2 = (g2.adjacency[rows, cols][informative] - p) / scale
    products = z1 * z2
    estimate = float(products.mean())
    se = float(products.std(ddof=1) / np.sqrt(products.size))
    return estimate, se
