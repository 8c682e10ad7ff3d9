"""
Small-graph symmetry machinery.
Handles automorphism orbits, canonical forms, isomorphisms and the
obfuscation-consistency check for nomination schemes.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from .graph import Graph, GraphError, Obfuscation

logger = logging.getLogger(__name__)

MAX_ORBIT_VERTICES = 10
MAX_CANONICAL_VERTICES = 8

class EnumerationLimitError(GraphError):
    """Exception raised when a graph is too large for exact enumeration."""
    pass

@dataclass(frozen=True)
class OrbitPartition:
    """Partition of a vertex set into automorphism orbits."""
    orbits: Tuple[FrozenSet[Hashable], ...]

    def orbit_of(self, label: Hashable) -> FrozenSet[Hashable]:
        for orbit in self.orbits:
            if label in orbit:
                return orbit
        raise GraphError(f"Vertex {label!r} is not covered by the partition")

    def is_singleton(self, label: Hashable) -> bool:
        return len(self.orbit_of(label)) == 1

@dataclass(frozen=True)
class CanonicalForm:
    """Isomorphism-invariant key plus the vertex order that realizes it."""
    key: Tuple
    order: Tuple[Hashable, ...]

def _require_small_unweighted(g: Graph, limit: int):
    if g.n > limit:
        raise EnumerationLimitError(f"Exact enumeration capped at {limit} vertices, graph has {g.n}")
    if g.weighted:
        raise GraphError("Symmetry enumeration requires an unweighted graph")

def _find_automorphism(adj: np.ndarray, degrees: np.ndarray, source: int, target: int) -> Optional[List[int]]:
    """Backtracking search for an automorphism mapping source to target."""
    n = adj.shape[0]
    rest = sorted((v for v in range(n) if v != source), key=lambda v: -degrees[v])
    order = [source] + rest
    mapping = [-1] * n
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        x = order[pos]
        candidates = [target] if pos == 0 else range(n)
        for y in candidates:
            if used[y] or degrees[y] != degrees[x]:
                continue
            if any(adj[x, z] != adj[y, mapping[z]] for z in order[:pos]):
                continue
            mapping[x] = y
            used[y] = True
            if extend(pos + 1):
                return True
            mapping[x] = -1
            used[y] = False
        return False

    return mapping if extend(0) else None

def automorphism_orbits(g: Graph, max_vertices: int = MAX_ORBIT_VERTICES) -> OrbitPartition:
    """
    Compute the exact automorphism orbit partition.

    Args:
        g: Unweighted graph
        max_vertices: Enumeration cap

    Returns:
        The orbit partition

    Raises:
        EnumerationLimitError: If the graph exceeds the cap
    """
    _require_small_unweighted(g, max_vertices)
    adj = g.adjacency
    degrees = g.degrees()
    parent = list(range(g.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u in range(g.n):
        for w in range(u + 1, g.n):
            if find(u) == find(w) or degrees[u] != degrees[w]:
                continue
            sigma = _find_automorphism(adj, degrees, u, w)
            if sigma is None:
                continue
            for v, image in enumerate(sigma):
                parent[find(v)] = find(image)

    groups: Dict[int, List[Hashable]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(g.labels[v])
    orbits = tuple(frozenset(members) for members in groups.values())
    logger.debug(f"Found {len(orbits)} orbits on {g.n} vertices")
    return OrbitPartition(orbits)

def canonical_form(g: Graph, max_vertices: int = MAX_CANONICAL_VERTICES) -> CanonicalForm:
    """
    Compute a canonical form by exhaustive minimization within degree classes.

    Args:
        g: Unweighted graph
        max_vertices: Enumeration cap

    Returns:
        The canonical form
    """
    _require_small_unweighted(g, max_vertices)
    adj = g.adjacency
    degrees = g.degrees()
    distinct = sorted(set(degrees.tolist()), reverse=True)
    classes = [[v for v in range(g.n) if degrees[v] == value] for value in distinct]
    upper = np.triu_indices(g.n, k=1)

    best_code = None
    best_order = None
    for parts in itertools.product(*(itertools.permutations(c) for c in classes)):
        order = [v for part in parts for v in part]
        code = tuple(adj[np.ix_(order, order)][upper].astype(int).tolist())
        if best_code is None or code < best_code:
            best_code = code
            best_order = order

    degree_key = tuple(int(d) for d in sorted(degrees.tolist(), reverse=True))
    order = best_order if best_order is not None else []
    return CanonicalForm((g.n, degree_key, best_code), tuple(g.labels[v] for v in order))

def find_isomorphism(g: Graph, h: Graph) -> Optional[Dict[Hashable, Hashable]]:
    """
    Find an isomorphism from g to h.

    Returns:
        Label mapping V(g) -> V(h), or None if the graphs are not isomorphic
    """
    cg = canonical_form(g)
    ch = canonical_form(h)
    if cg.key != ch.key:
        return None
    return dict(zip(cg.order, ch.order))

def is_isomorphic(g: Graph, h: Graph) -> bool:
    return canonical_form(g).key == canonical_form(h).key

def _ranking(output) -> List[Hashable]:
    return list(getattr(output, 'order', output))

def check_scheme_consistency(scheme: Callable, g1: Graph, g2: Graph, voi: Sequence[Hashable],
                             o1: Obfuscation, o2: Obfuscation) -> bool:
    """
    Check that a scheme ranks every automorphism orbit identically under two obfuscations.

    Args:
        scheme: Callable ``(g1, obfuscated_g2, voi)`` returning a ranking of obfuscated labels
        g1: First graph
        g2: Second graph
        voi: Vertices of interest
        o1: First obfuscation of V(g2)
        o2: Second obfuscation of V(g2)

    Returns:
        True if the orbit rank-sets agree
    """
    partition = automorphism_orbits(g2)
    ranked_1 = _ranking(scheme(g1, g2.relabel(o1), voi))
    ranked_2 = _ranking(scheme(g1, g2.relabel(o2), voi))
    rank_1 = {w: k for k, w in enumerate(ranked_1, start=1)}
    rank_2 = {w: k for k, w in enumerate(ranked_2, start=1)}

    rank_sets_agree = all(
        {rank_1[o1[x]] for x in orbit} == {rank_2[o2[x]] for x in orbit}
        for orbit in partition.orbits
    )
    positions_agree = all(
        partition.orbit_of(o1.preimage(w1)) == partition.orbit_of(o2.preimage(w2))
        for w1, w2 in zip(ranked_1, ranked_2)
    )
    if rank_sets_agree != positions_agree:
        raise GraphError("Orbit rank-sets and positionwise orbits disagree")
    return rank_sets_agree
