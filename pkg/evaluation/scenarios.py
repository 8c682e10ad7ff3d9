"""
Regime construction for simulated and loaded graph pairs.
"""

import logging
from dataclasses import dataclass
from typing import Hashable, List, Sequence, Tuple

import numpy as np

from adversary import AdversaryConfig, ContaminationRecord, contaminate
from graphs import Graph
from models import NominatablePair, SbmParams, make_nominatable_pair, sample_corr_sbm
from regularization import TrimConfig
from .harness import Regime

logger = logging.getLogger(__name__)

@dataclass(frozen=True, eq=False)
class SimulationScenario:
    """One correlated draw with its contamination and the two base pairs."""
    g1: Graph
    g2: Graph
    blocks: np.ndarray
    record: ContaminationRecord
    idealized: NominatablePair
    contaminated: NominatablePair

def regime_name(l: float, h: float) -> str:
    return f"regularized({l:g},{h:g})"

def simulate_scenario(params: SbmParams, rho: float, adversary: AdversaryConfig,
                      graph_seed: int) -> SimulationScenario:
    """
    Draw a correlated SBM pair and contaminate the second graph.

    The first graph keeps only the vertices outside W+ and W-; its counterpart
    in the contaminated graph is the same label, and W+ and W- become junk.

    Args:
        params: SBM parameters
        rho: Edge correlation
        adversary: Adversary parameters (carries its own seed)
        graph_seed: Seed of the graph draw

    Returns:
        The scenario
    """
    g1, g2, blocks = sample_corr_sbm(rho, params, graph_seed)
    record = contaminate(g2, adversary)
    clean = [v for v in g1.labels if v not in record.contaminated_vertices]
    g1_clean = g1.induced_subgraph(clean)
    contaminated = make_nominatable_pair(g1_clean, record.g_contaminated, blocks[g1.indices_of(clean)])
    idealized = contaminated.induced_core()
    logger.info(f"Scenario: {len(clean)} clean vertices, {len(record.contaminated_vertices)} contaminated")
    return SimulationScenario(g1, g2, blocks, record, idealized, contaminated)

def standard_regimes(idealized: NominatablePair, contaminated: NominatablePair,
                     trims: Sequence[Tuple[float, float]], semantics: str = 'prose') -> List[Regime]:
    """Idealized and contaminated regimes plus one trimmed regime per (l, h)."""
    regimes = [Regime('idealized', idealized), Regime('contaminated', contaminated)]
    for l, h in trims:
        regimes.append(Regime(regime_name(l, h), contaminated, TrimConfig(l, h, semantics=semantics)))
    return regimes

def loaded_regimes(pair: NominatablePair, trims: Sequence[Tuple[float, float]],
                   semantics: str = 'prose') -> List[Regime]:
    """
    Regimes for a loaded pair.

    The idealized regime uses the core-induced subgraphs of both graphs; the
    others pair the core-induced first graph with the full second graph.
    """
    idealized = pair.induced_core()
    noisy = NominatablePair(idealized.g1, pair.g2, pair.core, dict(pair.correspondence), pair.voi, pair.blocks)
    return standard_regimes(idealized, noisy, trims, semantics)
