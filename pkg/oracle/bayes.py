"""
Bayes-optimal nomination on an enumerated distribution.
Handles per-class rank tables, exact level-k losses, random
consistency-respecting comparison schemes and the optimality report.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, List, Sequence, Tuple

import numpy as np

from graphs import Graph, find_isomorphism
from utils.seeding import rng_for
from .enumeration import EnumeratedDistribution, IsoClassPartition, OracleError, class_lookup

logger = logging.getLogger(__name__)

LOSS_KINDS = ('recall', 'precision')

def _label_key(label: Hashable) -> Tuple[int, Any]:
    return (0, label) if isinstance(label, (int, np.integer)) else (1, str(label))

class ClassScheme:
    """
    A nomination scheme defined by one rank table per isomorphism class.

    The table orders the representative's g2 labels; any other pair of the
    class is ranked by pushing the table through the recorded isomorphism,
    which makes the scheme respect obfuscation consistency by construction.
    """

    def __init__(self, dist: EnumeratedDistribution, partition: IsoClassPartition,
                 tables: Sequence[Tuple[Hashable, ...]]):
        """
        Initialize the scheme.

        Args:
            dist: Enumerated distribution
            partition: Its isomorphism-class partition
            tables: Rank table per class over the representative's g2 labels
        """
        if len(tables) != len(partition.classes):
            raise OracleError(f"Expected {len(partition.classes)} rank tables, got {len(tables)}")
        self.dist = dist
        self.partition = partition
        self.tables = [tuple(t) for t in tables]
        self._class_of = {i: c for c, iso_class in enumerate(partition.classes) for i in iso_class.members}

    def ranking(self, index: int) -> Tuple[Hashable, ...]:
        """g2 labels of support pair ``index`` in ranked order."""
        if index not in self._class_of:
            raise OracleError(f"Support index {index} has no class")
        c = self._class_of[index]
        sigma = self.partition.classes[c].isomorphisms[index]
        return tuple(sigma[x] for x in self.tables[c])

    def as_function(self) -> Callable[[Graph, Graph, Sequence[Hashable]], List[Hashable]]:
        """The scheme as a callable on (g1, obfuscated g2, voi)."""
        def scheme(g1: Graph, obfuscated_g2: Graph, voi: Sequence[Hashable]) -> List[Hashable]:
            c = class_lookup(self.partition, g1, obfuscated_g2)
            representative = self.dist.support[self.partition.classes[c].representative]
            iso = find_isomorphism(representative.g2, obfuscated_g2)
            return [iso[x] for x in self.tables[c]]
        return scheme

    def prefix_vector(self, c: int) -> np.ndarray:
        """Probability, within class c, that rank j holds a vertex of interest."""
        iso_class = self.partition.classes[c]
        voi = set(self.dist.voi)
        vector = np.zeros(self.dist.m)
        for i in iso_class.members:
            weight = self.dist.support[i].probability / iso_class.probability
            for j, u in enumerate(self.ranking(i)):
                if u in voi:
                    vector[j] += weight
        return vector

class ExactScheme(ClassScheme):
    """Greedy scheme ordering each class by P(vertex is a vertex of interest | class)."""

    def __init__(self, dist: EnumeratedDistribution, partition: IsoClassPartition):
        voi = set(dist.voi)
        probabilities: List[Dict[Hashable, float]] = []
        tables = []
        tie_log = []
        for c, iso_class in enumerate(partition.classes):
            representative = dist.support[iso_class.representative]
            table = {x: 0.0 for x in representative.g2.labels}
            for i in iso_class.members:
                sigma = iso_class.isomorphisms[i]
                weight = dist.support[i].probability / iso_class.probability
                for x in table:
                    if sigma[x] in voi:
                        table[x] += weight
            order = sorted(table, key=lambda x: (-round(table[x], 12), _label_key(x)))
            values = [round(table[x], 12) for x in order]
            if len(set(values)) < len(values):
                tie_log.append({'class': c, 'tied_values': sorted({v for v in values if values.count(v) > 1})})
            probabilities.append(table)
            tables.append(tuple(order))
        super().__init__(dist, partition, tables)
        self.probabilities = probabilities
        self.tie_log = tie_log
        logger.info(f"Built Bayes-optimal tables for {len(tables)} classes ({len(tie_log)} with ties)")

def bayes_optimal_scheme(dist: EnumeratedDistribution, partition: IsoClassPartition) -> ExactScheme:
    """Construct the Bayes-optimal scheme of an enumerated distribution."""
    return ExactScheme(dist, partition)

def random_consistent_scheme(dist: EnumeratedDistribution, partition: IsoClassPartition,
                             rng: np.random.Generator) -> ClassScheme:
    """A scheme with a uniformly random rank table per class."""
    tables = []
    for iso_class in partition.classes:
        labels = list(dist.support[iso_class.representative].g2.labels)
        tables.append(tuple(labels[j] for j in rng.permutation(len(labels))))
    return ClassScheme(dist, partition, tables)

def exact_loss(dist: EnumeratedDistribution, scheme: ClassScheme, k: int, kind: str = 'recall') -> float:
    """
    Expected level-k loss of a scheme over the enumerated support.

    Raises:
        OracleError: If k is outside 1..m-1 or kind is unknown
    """
    if kind not in LOSS_KINDS:
        raise OracleError(f"kind must be one of {LOSS_KINDS}, got {kind!r}")
    if not 1 <= k <= dist.m - 1:
        raise OracleError(f"k must lie in 1..{dist.m - 1}, got {k}")
    if not dist.voi:
        raise OracleError("Losses need at least one vertex of interest")
    voi = set(dist.voi)
    total = 0.0
    for index, pair in enumerate(dist.support):
        hits = sum(1 for u in scheme.ranking(index)[:k] if u in voi)
        denominator = len(voi) if kind == 'recall' else k
        total += pair.probability * (1.0 - hits / denominator)
    return total

@dataclass
class OptimalityReport:
    """Comparison of the Bayes-optimal scheme against random schemes."""
    n_schemes: int
    optimal_losses: Dict[str, float]
    best_random_losses: Dict[str, float]
    loss_violations: List[Dict[str, Any]] = field(default_factory=list)
    majorization_violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.loss_violations and not self.majorization_violations

def verify_optimality(dist: EnumeratedDistribution, partition: IsoClassPartition,
                      n_schemes: int = 1000, seed: int = 0, tolerance: float = 1e-9) -> OptimalityReport:
    """
    Check the Bayes-optimal scheme against random consistency-respecting schemes.

    For every k in 1..m-1 and both loss kinds the optimal loss must not exceed
    any random scheme's loss, and per class the optimal prefix sums of
    P(rank j holds a vertex of interest) must dominate the random ones.
    """
    optimal = bayes_optimal_scheme(dist, partition)
    ks = range(1, dist.m)
    optimal_losses = {f"{kind}@{k}": exact_loss(dist, optimal, k, kind) for kind in LOSS_KINDS for k in ks}
    optimal_prefix = [np.cumsum(optimal.prefix_vector(c)) for c in range(len(partition.classes))]

    best = {key: np.inf for key in optimal_losses}
    report = OptimalityReport(n_schemes, optimal_losses, best)
    for s in range(n_schemes):
        scheme = random_consistent_scheme(dist, partition, rng_for(seed, 'random-scheme', s))
        for kind in LOSS_KINDS:
            for k in ks:
                key = f"{kind}@{k}"
                loss = exact_loss(dist, scheme, k, kind)
                best[key] = min(best[key], loss)
                if optimal_losses[key] > loss + tolerance:
                    report.loss_violations.append({'scheme': s, 'loss': key, 'optimal': optimal_losses[key],
                                                   'random': loss})
        for c in range(len(partition.classes)):
            prefix = np.cumsum(scheme.prefix_vector(c))
            if np.any(optimal_prefix[c] < prefix - tolerance):
                report.majorization_violations.append({'scheme': s, 'class': c})

    logger.info(f"Optimality check over {n_schemes} random schemes: "
                f"{len(report.loss_violations)} loss and {len(report.majorization_violations)} "
                f"majorization violations")
    return report

def oracle_report(dist: EnumeratedDistribution, partition: IsoClassPartition,
                  scheme: ExactScheme, optimality: OptimalityReport = None) -> Dict[str, Any]:
    """JSON-serializable dump of classes, probability tables and losses."""
    classes = []
    for c, iso_class in enumerate(partition.classes):
        representative = dist.support[iso_class.representative]
        classes.append({
            'class': c,
            'probability': iso_class.probability,
            'members': list(iso_class.members),
            'g1_edges': [[str(u), str(v)] for u, v, _ in representative.g1.edges()],
            'g2_edges': [[str(u), str(v)] for u, v, _ in representative.g2.edges()],
            'p_table': {str(x): p for x, p in scheme.probabilities[c].items()},
            'ranking': [str(x) for x in scheme.tables[c]],
        })
    ks = range(1, dist.m)
    report = {
        'n': dist.n,
        'm': dist.m,
        'voi': [str(v) for v in dist.voi],
        'support_size': len(dist.support),
        'raw_support_size': dist.raw_size,
        'removed_mass': dist.removed_mass,
        'classes': classes,
        'tie_log': scheme.tie_log,
        'losses': {f"{kind}@{k}": exact_loss(dist, scheme, k, kind) for kind in LOSS_KINDS for k in ks},
    }
    if optimality is not None:
        report['optimality'] = {
            'n_schemes': optimality.n_schemes,
            'holds': optimality.holds,
            'best_random_losses': optimality.best_random_losses,
            'loss_violations': optimality.loss_violations,
            'majorization_violations': len(optimality.majorization_violations),
        }
    return report
