"""
Exhaustive enumeration of tiny nominatable distributions.
Handles the support of a graph-pair law, the filter to pairs whose
vertices of interest have no symmetric twin, and the isomorphism-class
partition of that support.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Tuple

import numpy as np

from graphs import CanonicalForm, Graph, automorphism_orbits, canonical_form

logger = logging.getLogger(__name__)

MAX_ORACLE_VERTICES = 5

class OracleError(Exception):
    """Base exception for oracle construction errors."""
    pass

@dataclass(frozen=True, eq=False)
class OracleSpec:
    """
    Law of a tiny graph pair.

    g1 has labels 1..n and g2 has labels 1..core_size followed by
    n+1..n+m-core_size, so the core shares labels and junk labels never
    collide. ``p1``/``p2`` are scalars or per-pair probability matrices;
    core pairs of the two graphs have edge correlation ``rho``.
    """
    n: int
    m: int
    voi: Tuple[int, ...]
    p1: Any = 0.5
    p2: Any = 0.5
    core_size: int = -1
    rho: float = 0.0

    def __post_init__(self):
        core = min(self.n, self.m) if self.core_size < 0 else self.core_size
        object.__setattr__(self, 'core_size', core)
        object.__setattr__(self, 'voi', tuple(self.voi))
        if self.n > MAX_ORACLE_VERTICES or self.m > MAX_ORACLE_VERTICES:
            raise OracleError(f"Exact enumeration supports n, m <= {MAX_ORACLE_VERTICES}, got n={self.n}, m={self.m}")
        if not 0 <= core <= min(self.n, self.m):
            raise OracleError(f"core_size must lie in 0..{min(self.n, self.m)}, got {core}")
        if any(not 1 <= v <= core for v in self.voi):
            raise OracleError(f"Vertices of interest must be core labels 1..{core}, got {self.voi}")
        if not 0.0 <= self.rho <= 1.0:
            raise OracleError(f"rho must lie in [0, 1], got {self.rho}")
        object.__setattr__(self, 'p1', self._matrix(self.p1, self.n))
        object.__setattr__(self, 'p2', self._matrix(self.p2, self.m))

    @staticmethod
    def _matrix(value: Any, size: int) -> np.ndarray:
        matrix = np.full((size, size), float(value)) if np.isscalar(value) else np.array(value, dtype=float)
        if matrix.shape != (size, size) or not np.array_equal(matrix, matrix.T):
            raise OracleError(f"Edge probabilities must be a symmetric {size}x{size} matrix")
        if np.any(matrix < 0) or np.any(matrix > 1):
            raise OracleError("Edge probabilities must lie in [0, 1]")
        return matrix

    @property
    def g1_labels(self) -> Tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    @property
    def g2_labels(self) -> Tuple[int, ...]:
        return tuple(range(1, self.core_size + 1)) + tuple(range(self.n + 1, self.n + self.m - self.core_size + 1))

@dataclass(frozen=True, eq=False)
class SupportPair:
    g1: Graph
    g2: Graph
    probability: float

@dataclass(frozen=True, eq=False)
class EnumeratedDistribution:
    """Support restricted to pairs whose vertices of interest are fixed by every automorphism of g2."""
    support: Tuple[SupportPair, ...]
    voi: Tuple[int, ...]
    n: int
    m: int
    removed_mass: float
    raw_size: int = 0

@dataclass(frozen=True, eq=False)
class IsoClass:
    """Support pairs sharing g1 and the isomorphism class of g2."""
    representative: int
    members: Tuple[int, ...]
    probability: float
    isomorphisms: Dict[int, Dict[Hashable, Hashable]]

@dataclass(frozen=True, eq=False)
class IsoClassPartition:
    classes: Tuple[IsoClass, ...]
    keys: Dict[Tuple, int]

    def class_of(self, index: int) -> int:
        for c, iso_class in enumerate(self.classes):
            if index in iso_class.members:
                return c
        raise OracleError(f"Support index {index} is not in the partition")

def _slot_outcomes(spec: OracleSpec) -> List[Tuple[Tuple[str, int, int], List[Tuple[Tuple[int, ...], float]]]]:
    """Per vertex pair, the nonzero-probability edge outcomes."""
    slots = []
    c = spec.core_size
    for i, j in itertools.combinations(range(c), 2):
        a, b = spec.p1[i, j], spec.p2[i, j]
        both = a * b + spec.rho * np.sqrt(a * (1 - a) * b * (1 - b))
        outcomes = {(1, 1): both, (1, 0): a - both, (0, 1): b - both, (0, 0): 1 - a - b + both}
        if min(outcomes.values()) < -1e-12:
            raise OracleError(f"Correlation rho={spec.rho} is not achievable for probabilities {a}, {b}")
        slots.append((('core', i, j), [(k, max(v, 0.0)) for k, v in outcomes.items() if v > 1e-15]))
    for i, j in itertools.combinations(range(spec.n), 2):
        if i < c and j < c:
            continue
        a = spec.p1[i, j]
        slots.append((('g1', i, j), [(k, v) for k, v in (((1,), a), ((0,), 1 - a)) if v > 0]))
    for i, j in itertools.combinations(range(spec.m), 2):
        if i < c and j < c:
            continue
        b = spec.p2[i, j]
        slots.append((('g2', i, j), [(k, v) for k, v in (((1,), b), ((0,), 1 - b)) if v > 0]))
    return slots

def enumerate_support(spec: OracleSpec) -> EnumeratedDistribution:
    """
    Materialize the law of a tiny pair and filter it to pairs where every
    vertex of interest is its own automorphism orbit in g2.

    Returns:
        The renormalized distribution with the removed mass reported

    Raises:
        OracleError: If every pair is filtered out
    """
    slots = _slot_outcomes(spec)
    g1_cache: Dict[bytes, Graph] = {}
    g2_cache: Dict[bytes, Tuple[Graph, bool]] = {}
    kept: List[SupportPair] = []
    total = removed = 0.0
    raw_size = 0

    for combination in itertools.product(*(outcomes for _, outcomes in slots)):
        A1 = np.zeros((spec.n, spec.n))
        A2 = np.zeros((spec.m, spec.m))
        probability = 1.0
        for ((kind, i, j), _), (edges, p) in zip(slots, combination):
            probability *= p
            if kind == 'core':
                A1[i, j] = A1[j, i] = edges[0]
                A2[i, j] = A2[j, i] = edges[1]
            elif kind == 'g1':
                A1[i, j] = A1[j, i] = edges[0]
            else:
                A2[i, j] = A2[j, i] = edges[0]
        total += probability
        raw_size += 1

        key1, key2 = A1.tobytes(), A2.tobytes()
        if key1 not in g1_cache:
            g1_cache[key1] = Graph(A1, spec.g1_labels)
        if key2 not in g2_cache:
            g2 = Graph(A2, spec.g2_labels)
            orbits = automorphism_orbits(g2)
            g2_cache[key2] = (g2, all(orbits.is_singleton(v) for v in spec.voi))
        g2, admissible = g2_cache[key2]
        if admissible:
            kept.append(SupportPair(g1_cache[key1], g2, probability))
        else:
            removed += probability

    if not kept:
        raise OracleError("Every support pair has a vertex of interest with a symmetric twin")
    if removed > 0:
        logger.info(f"Removed {removed:.6g} probability mass with non-singleton v.o.i. orbits")
    mass = total - removed
    support = tuple(SupportPair(pair.g1, pair.g2, pair.probability / mass) for pair in kept)
    logger.info(f"Enumerated {len(support)} support pairs (n={spec.n}, m={spec.m})")
    return EnumeratedDistribution(support, spec.voi, spec.n, spec.m, removed / total, raw_size)

def partition_by_isomorphism(dist: EnumeratedDistribution) -> IsoClassPartition:
    """
    Group support pairs by (g1, isomorphism class of g2).

    Each class keeps its first pair as representative and an isomorphism from
    the representative's g2 onto every member's g2.
    """
    members: Dict[Tuple, List[int]] = {}
    forms: Dict[int, CanonicalForm] = {}
    for index, pair in enumerate(dist.support):
        form = canonical_form(pair.g2)
        forms[index] = form
        key = (pair.g1.adjacency.tobytes(), form.key)
        members.setdefault(key, []).append(index)

    classes = []
    keys = {}
    for c, (key, indices) in enumerate(members.items()):
        representative = indices[0]
        rep_order = forms[representative].order
        isomorphisms = {i: dict(zip(rep_order, forms[i].order)) for i in indices}
        probability = sum(dist.support[i].probability for i in indices)
        classes.append(IsoClass(representative, tuple(indices), probability, isomorphisms))
        keys[key] = c
    logger.debug(f"Partitioned {len(dist.support)} pairs into {len(classes)} classes")
    return IsoClassPartition(tuple(classes), keys)

def class_lookup(partition: IsoClassPartition, g1: Graph, g2: Graph) -> int:
    """Class index of an arbitrary (possibly relabeled) pair."""
    key = (g1.adjacency.tobytes(), canonical_form(g2).key)
    if key not in partition.keys:
        raise OracleError("Pair does not belong to any support class")
    return partition.keys[key]

