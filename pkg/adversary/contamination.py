"""
Edge adversary for vertex nomination.
Handles contaminated-vertex selection, probabilistic edge addition/deletion,
the stratified block law of the contaminated graph and the inconsistency
conditions on the block parameters.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Hashable, Iterable, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from graphs import Graph

logger = logging.getLogger(__name__)

STRATA = ('B1', 'B1+', 'B1-', 'B2', 'B2+', 'B2-')
X5_VARIANTS = ('verbatim', 'two_trial')
PAIR_TRIALS = ('unordered', 'ordered')

class AdversaryError(Exception):
    """Base exception for adversary configuration and contamination errors."""
    pass

@dataclass(frozen=True)
class AdversaryConfig:
    """Selection probabilities pi_plus/pi_minus, edit probabilities s_plus/s_minus and the seed."""
    pi_plus: float
    pi_minus: float
    s_plus: float
    s_minus: float
    rng_seed: int = 0
    pair_trials: str = 'unordered'

    def __post_init__(self):
        for name in ('pi_plus', 'pi_minus', 's_plus', 's_minus'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise AdversaryError(f"{name} must lie in [0, 1], got {value}")
        if self.pair_trials not in PAIR_TRIALS:
            raise AdversaryError(f"pair_trials must be one of {PAIR_TRIALS}, got {self.pair_trials!r}")

@dataclass(frozen=True, eq=False)
class ContaminationRecord:
    """Outcome of one adversary run."""
    g_contaminated: Graph
    w_plus: FrozenSet[Hashable]
    w_minus: FrozenSet[Hashable]
    edges_added: Tuple[Tuple[Hashable, Hashable], ...]
    edges_deleted: Tuple[Tuple[Hashable, Hashable], ...]

    @property
    def contaminated_vertices(self) -> FrozenSet[Hashable]:
        return self.w_plus | self.w_minus

    def to_audit_dict(self, **extra: Any) -> Dict[str, Any]:
        """JSON-serializable summary for the audit log."""
        record = {
            'w_plus': sorted(str(v) for v in self.w_plus),
            'w_minus': sorted(str(v) for v in self.w_minus),
            'edges_added': [[str(u), str(v)] for u, v in self.edges_added],
            'edges_deleted': [[str(u), str(v)] for u, v in self.edges_deleted],
        }
        record.update(extra)
        return record

def _trial_probability(trials: np.ndarray, s: float, pair_trials: str) -> np.ndarray:
    if pair_trials == 'ordered':
        return 1.0 - (1.0 - s) ** trials
    return np.where(trials > 0, s, 0.0)

def contaminate(g: Graph, cfg: AdversaryConfig,
                w_plus: Optional[Iterable[Hashable]] = None,
                w_minus: Optional[Iterable[Hashable]] = None) -> ContaminationRecord:
    """
    Run the adversary on an unweighted graph.

    W+ is drawn Bernoulli(pi_plus) per vertex, W- Bernoulli(pi_minus) per
    vertex outside W+. Missing edges of W+ x (V \\ W-) are added with
    probability s_plus, present edges of W- x (V \\ W+) deleted with
    probability s_minus.

    Args:
        g: Unweighted graph
        cfg: Adversary parameters
        w_plus: Optional forced W+ (skips the draw)
        w_minus: Optional forced W- (skips the draw)

    Returns:
        The contamination record

    Raises:
        AdversaryError: On weighted input or overlapping forced sets
    """
    if g.weighted:
        raise AdversaryError("The adversary only contaminates unweighted graphs")

    rng = np.random.default_rng(cfg.rng_seed)
    n = g.n
    plus_draw = rng.random(n) < cfg.pi_plus
    minus_draw = rng.random(n) < cfg.pi_minus
    if w_plus is None:
        in_plus = plus_draw
    else:
        in_plus = np.zeros(n, dtype=bool)
        in_plus[g.indices_of(w_plus)] = True
    if w_minus is None:
        in_minus = minus_draw & ~in_plus
    else:
        in_minus = np.zeros(n, dtype=bool)
        in_minus[g.indices_of(w_minus)] = True
    if np.any(in_plus & in_minus):
        raise AdversaryError("W+ and W- must be disjoint")

    # trials[v, u] counts ordered pairs (v, u) or (u, v) eligible for an edit
    add_trials = (np.outer(in_plus, ~in_minus).astype(int) + np.outer(~in_minus, in_plus).astype(int))
    del_trials = (np.outer(in_minus, ~in_plus).astype(int) + np.outer(~in_plus, in_minus).astype(int))
    np.fill_diagonal(add_trials, 0)
    np.fill_diagonal(del_trials, 0)
    assert not np.any((add_trials > 0) & (del_trials > 0)), "pair eligible for both addition and deletion"

    A = g.adjacency
    draws = rng.random((n, n))
    add = np.triu((A == 0) & (draws < _trial_probability(add_trials, cfg.s_plus, cfg.pair_trials)), k=1)
    delete = np.triu((A != 0) & (draws < _trial_probability(del_trials, cfg.s_minus, cfg.pair_trials)), k=1)

    contaminated = A.copy()
    contaminated[add | add.T] = 1.0
    contaminated[delete | delete.T] = 0.0

    labels = g.labels
    added = tuple((labels[i], labels[j]) for i, j in zip(*np.nonzero(add)))
    deleted = tuple((labels[i], labels[j]) for i, j in zip(*np.nonzero(delete)))
    record = ContaminationRecord(
        Graph(contaminated, labels),
        frozenset(labels[i] for i in np.flatnonzero(in_plus)),
        frozenset(labels[i] for i in np.flatnonzero(in_minus)),
        added,
        deleted,
    )
    logger.info(f"Adversary: |W+|={len(record.w_plus)}, |W-|={len(record.w_minus)}, "
                f"added {len(added)} edges, deleted {len(deleted)} edges")
    return record

def _check_two_block(B: Any) -> Tuple[float, float, float]:
    B = np.asarray(B, dtype=float)
    if B.shape != (2, 2) or B[0, 1] != B[1, 0]:
        raise AdversaryError(f"Expected a symmetric 2x2 block matrix, got shape {B.shape}")
    return float(B[0, 0]), float(B[1, 1]), float(B[0, 1])

def _layout(p, q, r, x1, x2, x3, x4, x5, x6, x7, x8) -> np.ndarray:
    return np.array([
        [p, x1, x2, r, x3, x4],
        [x1, x1, p, x3, x5, r],
        [x2, p, x2, x4, r, x6],
        [r, x3, x4, q, x7, x8],
        [x3, x5, r, x7, x7, q],
        [x4, r, x6, x8, q, x8],
    ])

def contaminated_block_matrix(B: Any, s_plus: float, s_minus: float, x5_variant: str = 'verbatim') -> np.ndarray:
    """
    Published 6x6 block matrix of the contaminated graph.

    Rows and columns follow ``STRATA``. The verbatim x5 is
    r + (2 s+ - s+)^2 (1 - r); 'two_trial' uses r + (2 s+ - s+^2)(1 - r).

    Args:
        B: 2x2 matrix [[p, r], [r, q]]
        s_plus: Edge-addition probability
        s_minus: Edge-deletion probability
        x5_variant: 'verbatim' or 'two_trial'

    Returns:
        Symmetric 6x6 matrix
    """
    if x5_variant not in X5_VARIANTS:
        raise AdversaryError(f"x5_variant must be one of {X5_VARIANTS}, got {x5_variant!r}")
    p, q, r = _check_two_block(B)
    x1 = p + s_plus * (1 - p)
    x2 = p * (1 - s_minus)
    x3 = r + s_plus * (1 - r)
    x4 = (1 - s_minus) * r
    if x5_variant == 'verbatim':
        x5 = r + (2 * s_plus - s_plus) ** 2 * (1 - r)
    else:
        x5 = r + (2 * s_plus - s_plus ** 2) * (1 - r)
    x6 = r * (1 - s_minus) ** 2
    x7 = q + s_plus * (1 - q)
    x8 = q * (1 - s_minus)
    return _layout(p, q, r, x1, x2, x3, x4, x5, x6, x7, x8)

def realized_block_matrix(B: Any, s_plus: float, s_minus: float, pair_trials: str = 'unordered') -> np.ndarray:
    """
    Exact stratum law of ``contaminate`` under a pair-trial mode.

    With unordered trials each pair is edited at most once, so W+ x W+ and
    W- x W- pairs behave like any other eligible pair. With ordered trials
    those pairs get two independent chances.
    """
    if pair_trials not in PAIR_TRIALS:
        raise AdversaryError(f"pair_trials must be one of {PAIR_TRIALS}, got {pair_trials!r}")
    p, q, r = _check_two_block(B)
    base = np.array([[p, r], [r, q]])
    block = np.array([0, 0, 0, 1, 1, 1])
    status = np.array([0, 1, -1, 0, 1, -1])
    matrix = np.zeros((6, 6))
    for a in range(6):
        for b in range(6):
            value = base[block[a], block[b]]
            plus = int(status[a] == 1) + int(status[b] == 1)
            minus = int(status[a] == -1) + int(status[b] == -1)
            if plus and not minus:
                trials = plus if pair_trials == 'ordered' else 1
                value = value + (1 - (1 - s_plus) ** trials) * (1 - value)
            elif minus and not plus:
                trials = minus if pair_trials == 'ordered' else 1
                value = value * (1 - s_minus) ** trials
            matrix[a, b] = value
    return matrix

def stratified_densities(record: ContaminationRecord, blocks: Mapping[Hashable, int]) -> pd.DataFrame:
    """
    Empirical edge densities of the contaminated graph per stratum pair.

    Strata cross the block (0 or 1) with W+/W- membership as realized.

    Args:
        record: Adversary output
        blocks: Block (0 or 1) of every vertex

    Returns:
        DataFrame with one row per unordered stratum pair (21 rows)
    """
    g = record.g_contaminated
    stratum = np.empty(g.n, dtype=int)
    for i, label in enumerate(g.labels):
        block = blocks[label]
        if block not in (0, 1):
            raise AdversaryError(f"Stratified densities need two blocks, vertex {label!r} has block {block}")
        offset = 1 if label in record.w_plus else 2 if label in record.w_minus else 0
        stratum[i] = 3 * block + offset

    A = g.adjacency != 0
    rows = []
    for a in range(6):
        in_a = stratum == a
        for b in range(a, 6):
            in_b = stratum == b
            if a == b:
                size = int(in_a.sum())
                pairs = size * (size - 1) // 2
                edges = int(A[np.ix_(in_a, in_a)].sum()) // 2
            else:
                pairs = int(in_a.sum()) * int(in_b.sum())
                edges = int(A[np.ix_(in_a, in_b)].sum())
            density = edges / pairs if pairs else float('nan')
            rows.append({'stratum_a': STRATA[a], 'stratum_b': STRATA[b],
                         'pairs': pairs, 'edges': edges, 'density': density})
    return pd.DataFrame(rows)

def density_law_check(densities: pd.DataFrame, matrix: np.ndarray, tolerance: float = 3.0) -> pd.DataFrame:
    """
    Compare stratum densities with a 6x6 block matrix.

    Args:
        densities: Output of ``stratified_densities``
        matrix: Expected block matrix
        tolerance: Allowed deviation in binomial standard errors

    Returns:
        Copy of densities with expected, se, z and within columns
    """
    index = {name: i for i, name in enumerate(STRATA)}
    report = densities.copy()
    expected = np.array([matrix[index[a], index[b]]
                         for a, b in zip(report['stratum_a'], report['stratum_b'])])
    pairs = report['pairs'].to_numpy(dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        se = np.sqrt(expected * (1 - expected) / pairs)
        deviation = np.abs(report['density'].to_numpy() - expected)
        z = np.where(se > 0, deviation / se, np.where(deviation > 0, np.inf, 0.0))
    report['expected'] = expected
    report['se'] = se
    report['z'] = z
    report['within'] = (pairs == 0) | (z <= tolerance)
    return report

def inconsistency_conditions(p: float, q: float, s_plus: float, s_minus: float) -> Tuple[bool, bool]:
    """
    Evaluate the two block-parameter conditions under which the adversary
    can push a pair out of the nomination rule's consistency class.

    Returns:
        (p - q < s_minus, (p - q) / (1 - q) < s_plus)

    Raises:
        AdversaryError: If a probability is out of range or q = 1
    """
    for name, value in (('p', p), ('q', q), ('s_plus', s_plus), ('s_minus', s_minus)):
        if not 0.0 <= value <= 1.0:
            raise AdversaryError(f"{name} must lie in [0, 1], got {value}")
    if q == 1.0:
        raise AdversaryError("(p - q) / (1 - q) is undefined for q = 1")
    return (p - q < s_minus, (p - q) / (1 - q) < s_plus)
