"""
Nominatable graph pairs.
Handles core/junk bookkeeping, vertex-of-interest selection and pair export.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from graphs import Graph, write_edge_list
from .sbm import ModelError

logger = logging.getLogger(__name__)

VoiSpec = Union[None, int, Sequence[Hashable]]

@dataclass(frozen=True, eq=False)
class NominatablePair:
    """
    Graph pair with a core correspondence.

    ``core`` holds g1 labels; ``correspondence`` maps each of them to its g2
    label. ``voi`` is a subset of ``core``. ``blocks`` optionally records a
    block per g1 label for simulated pairs.
    """
    g1: Graph
    g2: Graph
    core: Tuple[Hashable, ...]
    correspondence: Dict[Hashable, Hashable]
    voi: Tuple[Hashable, ...] = ()
    blocks: Optional[Dict[Hashable, int]] = field(default=None)

    def __post_init__(self):
        core = tuple(self.core)
        object.__setattr__(self, 'core', core)
        object.__setattr__(self, 'voi', tuple(self.voi))
        if set(self.correspondence) != set(core):
            raise ModelError("Correspondence must be defined exactly on the core")
        images = list(self.correspondence.values())
        if len(set(images)) != len(images):
            raise ModelError("Correspondence is not injective")
        missing_1 = [v for v in core if v not in self.g1]
        missing_2 = [u for u in images if u not in self.g2]
        if missing_1 or missing_2:
            raise ModelError(f"Core vertices missing from graphs: g1={missing_1[:5]}, g2={missing_2[:5]}")
        if self.junk1 & self.junk2:
            raise ModelError(f"Junk sets overlap: {sorted(map(str, self.junk1 & self.junk2))[:5]}")
        outside = [v for v in self.voi if v not in self.correspondence]
        if outside:
            raise ModelError(f"Vertices of interest must be core vertices, got {outside[:5]}")

    @property
    def junk1(self) -> FrozenSet[Hashable]:
        return frozenset(self.g1.labels).difference(self.core)

    @property
    def junk2(self) -> FrozenSet[Hashable]:
        return frozenset(self.g2.labels).difference(self.correspondence.values())

    def counterpart(self, v: Hashable) -> Optional[Hashable]:
        """g2 label of a g1 vertex, or None when it has no counterpart."""
        return self.correspondence.get(v)

    def with_voi(self, voi: Sequence[Hashable]) -> 'NominatablePair':
        return NominatablePair(self.g1, self.g2, self.core, self.correspondence, tuple(voi), self.blocks)

    def restrict_g2(self, g2: Graph) -> 'NominatablePair':
        """
        Replace g2 by a subgraph, moving vertices whose counterpart vanished into J1.

        Args:
            g2: Subgraph of the current g2

        Returns:
            The restricted pair
        """
        core = tuple(v for v in self.core if self.correspondence[v] in g2)
        correspondence = {v: self.correspondence[v] for v in core}
        kept = set(core)
        voi = tuple(v for v in self.voi if v in kept)
        return NominatablePair(self.g1, g2, core, correspondence, voi, self.blocks)

    def induced_core(self) -> 'NominatablePair':
        """Pair of core-induced subgraphs with no junk on either side."""
        g1 = self.g1.induced_subgraph(self.core)
        g2 = self.g2.induced_subgraph(self.correspondence.values())
        return NominatablePair(g1, g2, self.core, dict(self.correspondence), self.voi, self.blocks)

def make_nominatable_pair(g1: Graph, g2: Graph, blocks: Optional[np.ndarray] = None,
                          voi_spec: VoiSpec = None, rng_seed: int = 0) -> NominatablePair:
    """
    Build a nominatable pair from two graphs sharing labels on the core.

    Args:
        g1: First graph
        g2: Second graph
        blocks: Optional block per g1 row
        voi_spec: None for every core vertex, an int for a uniform sample of that
            size, or an explicit list of core vertices
        rng_seed: Seed for the uniform sample

    Returns:
        The nominatable pair

    Raises:
        ModelError: If the requested vertices of interest are not core vertices
    """
    shared = set(g2.labels)
    core = tuple(v for v in g1.labels if v in shared)
    correspondence = {v: v for v in core}

    if voi_spec is None:
        voi = core
    elif isinstance(voi_spec, (int, np.integer)):
        if voi_spec > len(core) or voi_spec < 0:
            raise ModelError(f"Cannot sample {voi_spec} vertices of interest from a core of {len(core)}")
        rng = np.random.default_rng(rng_seed)
        picks = rng.choice(len(core), size=int(voi_spec), replace=False)
        voi = tuple(core[i] for i in sorted(picks))
    else:
        voi = tuple(voi_spec)

    block_map = None
    if blocks is not None:
        block_map = {label: int(b) for label, b in zip(g1.labels, blocks)}

    pair = NominatablePair(g1, g2, core, correspondence, voi, block_map)
    logger.debug(f"Nominatable pair: |C|={len(core)}, |J1|={len(pair.junk1)}, |J2|={len(pair.junk2)}, |V*|={len(voi)}")
    return pair

def write_pair(pair: NominatablePair, directory: str):
    """
    Export a pair as two edge lists and a correspondence TSV.

    Args:
        pair: Pair to export
        directory: Target directory
    """
    os.makedirs(directory, exist_ok=True)
    write_edge_list(pair.g1, os.path.join(directory, 'g1.edgelist'))
    write_edge_list(pair.g2, os.path.join(directory, 'g2.edgelist'))
    frame = pd.DataFrame({
        'g1_label': list(pair.core),
        'g2_label': [pair.correspondence[v] for v in pair.core],
    })
    frame.to_csv(os.path.join(directory, 'correspondence.tsv'), sep='\t', index=False, header=False,
                 lineterminator='\n')
    logger.info(f"Exported pair with {len(pair.core)} core vertices to {directory}")
