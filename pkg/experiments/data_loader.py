"""
Loading of real graph pairs for nomination runs.
Handles edge lists, the core correspondence and seed/vertex-of-interest lists.
"""

import logging
from typing import Dict, Hashable, List, Optional, Tuple

from graphs import Graph, load_edge_list
from models import ModelError, NominatablePair

logger = logging.getLogger(__name__)

class DataLoadError(Exception):
    """Raised when an input file is malformed or inconsistent with the graphs."""
    pass

def _content_lines(path: str):
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if line:
                yield line_number, line

def load_correspondence(path: str, g1: Graph, g2: Graph) -> Dict[Hashable, Hashable]:
    """
    Load a two-column g1-label/g2-label correspondence.

    Raises:
        DataLoadError: On malformed lines, unknown labels or a non-bijective map
    """
    correspondence: Dict[Hashable, Hashable] = {}
    images: Dict[Hashable, int] = {}
    origins: Dict[Hashable, int] = {}
    for line_number, line in _content_lines(path):
        tokens = line.split('\t') if '\t' in line else line.split()
        tokens = [t.strip() for t in tokens if t.strip()]
        if len(tokens) != 2:
            raise DataLoadError(f"{path}:{line_number}: expected 'g1_label<TAB>g2_label', got {line!r}")
        v, u = tokens
        if v not in g1:
            raise DataLoadError(f"{path}:{line_number}: {v!r} is not a vertex of the first graph")
        if u not in g2:
            raise DataLoadError(f"{path}:{line_number}: {u!r} is not a vertex of the second graph")
        if v in origins:
            raise DataLoadError(f"{path}:{line_number}: {v!r} already mapped on line {origins[v]}")
        if u in images:
            raise DataLoadError(f"{path}:{line_number}: {u!r} already an image on line {images[u]}")
        origins[v] = images[u] = line_number
        correspondence[v] = u
    return correspondence

def load_label_list(path: str, allowed: Dict[Hashable, Hashable], what: str) -> Tuple[Hashable, ...]:
    """
    Load one label per line; every label must be a core vertex.

    Raises:
        DataLoadError: On unknown or repeated labels
    """
    labels: List[Hashable] = []
    seen = set()
    for line_number, line in _content_lines(path):
        if line not in allowed:
            raise DataLoadError(f"{path}:{line_number}: {what} {line!r} has no counterpart in the second graph")
        if line in seen:
            raise DataLoadError(f"{path}:{line_number}: {what} {line!r} listed twice")
        seen.add(line)
        labels.append(line)
    return tuple(labels)

def load_pair(edge_list_1: str, edge_list_2: str, correspondence_tsv: str,
              seeds_file: Optional[str] = None,
              voi_file: Optional[str] = None) -> Tuple[NominatablePair, Tuple[Hashable, ...]]:
    """
    Load a nominatable pair and its seeds.

    The core is the set of mapped first-graph vertices; unmapped vertices of
    either graph are junk. Without a vertex-of-interest file every core vertex
    is of interest.

    Args:
        edge_list_1: First graph's edge list
        edge_list_2: Second graph's edge list
        correspondence_tsv: Core correspondence
        seeds_file: Optional seed list (first-graph labels)
        voi_file: Optional vertex-of-interest list (first-graph labels)

    Returns:
        (pair, seeds)

    Raises:
        DataLoadError: On malformed or inconsistent input
    """
    g1 = load_edge_list(edge_list_1)
    g2 = load_edge_list(edge_list_2)
    correspondence = load_correspondence(correspondence_tsv, g1, g2)
    core = tuple(v for v in g1.labels if v in correspondence)
    seeds = load_label_list(seeds_file, correspondence, 'seed') if seeds_file else ()
    voi = load_label_list(voi_file, correspondence, 'vertex of interest') if voi_file else core
    try:
        pair = NominatablePair(g1, g2, core, correspondence, voi)
    except ModelError as e:
        raise DataLoadError(f"{correspondence_tsv}: {e}") from e
    logger.info(f"Loaded pair: |C|={len(core)}, |J1|={len(pair.junk1)}, |J2|={len(pair.junk2)}, "
                f"{len(seeds)} seeds, {len(voi)} vertices of interest")
    return pair, seeds
