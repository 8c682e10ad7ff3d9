"""
Graph representation, obfuscation and small-graph symmetry modules.
"""

from .graph import Graph, Obfuscation, GraphError, UnknownVertexError, ObfuscationError
from .automorphism import (
    OrbitPartition,
    CanonicalForm,
    EnumerationLimitError,
    automorphism_orbits,
    canonical_form,
    find_isomorphism,
    is_isomorphic,
    check_scheme_consistency,
)
from .io import EdgeListError, load_edge_list, write_edge_list

__all__ = [
    'Graph',
    'Obfuscation',
    'GraphError',
    'UnknownVertexError',
    'ObfuscationError',
    'OrbitPartition',
    'CanonicalForm',
    'EnumerationLimitError',
    'automorphism_orbits',
    'canonical_form',
    'find_isomorphism',
    'is_isomorphic',
    'check_scheme_consistency',
    'EdgeListError',
    'load_edge_list',
    'write_edge_list',
]
