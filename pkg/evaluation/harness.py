"""
Monte Carlo harness for nomination experiments.
Draws seed sets, runs the pipeline under each regime and aggregates curves
and losses into an EvalReport.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from graphs import Obfuscation
from models import NominatablePair
from nomination import NominationConfig, NominationPipeline
from regularization import TrimConfig, trim
from utils.seeding import derive_seed, rng_for
from .curves import RankMap, loss_table, performance_curve
from .losses import EvaluationError

logger = logging.getLogger(__name__)

SUMMARY_XS = (1, 5, 10, 15, 20, 30)
DEFAULT_LOSS_KS = (1, 5, 10, 15, 20, 30)
VOI_MODES = ('sweep', 'joint')

@dataclass(frozen=True, eq=False)
class Regime:
    """
    A named way of presenting the second graph.

    When ``trim`` is set, g2 is trimmed with the replicate's seed
    counterparts protected before nominating.
    """
    name: str
    pair: NominatablePair
    trim: Optional[TrimConfig] = None

    def build(self, seeds: Sequence[Hashable]) -> NominatablePair:
        if self.trim is None:
            return self.pair
        protect = [self.pair.correspondence[s] for s in seeds]
        return self.pair.restrict_g2(trim(self.pair.g2, self.trim.with_protect(protect)))

@dataclass(frozen=True)
class ReplicateResult:
    regime: str
    replicate: int
    seeds: Tuple[Hashable, ...]
    ranks: Dict[Hashable, Optional[int]]
    candidates: int

@dataclass
class EvalReport:
    """Curves and losses per regime, plus the replicate descriptors."""
    regimes: List[str]
    curves: Dict[str, pd.DataFrame]
    losses: Dict[str, pd.DataFrame]
    replicates: List[Tuple[Hashable, ...]]
    results: List[ReplicateResult] = field(default_factory=list)
    excluded_seed_voi: int = 0
    unranked_counterparts: Dict[str, int] = field(default_factory=dict)

    def summary(self, xs: Sequence[int] = SUMMARY_XS) -> pd.DataFrame:
        """Mean top-x counts, one row per regime and one column per x."""
        rows = []
        for name in self.regimes:
            curve = self.curves[name].set_index('x')
            row = {'regime': name}
            for x in xs:
                row[f"x={x}"] = float(curve['mean'].get(x, curve['mean'].iloc[-1]))
            rows.append(row)
        return pd.DataFrame(rows)

    def write(self, tracker, slugs: Optional[Dict[str, str]] = None):
        """
        Write per-regime curves and losses and the summary table.

        Args:
            tracker: RunTracker owning the output directory
            slugs: Optional regime name -> file-safe name
        """
        slugs = slugs or {name: re.sub(r'[^A-Za-z0-9]+', '_', name).strip('_') for name in self.regimes}
        for name in self.regimes:
            tracker.write_table(f"curves_{slugs[name]}.csv", self.curves[name])
            tracker.write_table(f"losses_{slugs[name]}.csv", self.losses[name])
        tracker.write_table('summary.tsv', self.summary(), sep='\t')

def draw_seed_sets(reference: NominatablePair, n_seed_sets: int, seed_size: int,
                   master_seed: int) -> List[Tuple[Hashable, ...]]:
    """
    Draw seed sets uniformly from the core outside V*.

    When V* is the whole core (the all-core sweep), seeds are drawn from the
    core and the remaining core vertices act as vertices of interest.

    Raises:
        EvaluationError: If seed_size exceeds the available core
    """
    voi = set(reference.voi)
    pool = [v for v in reference.core if v not in voi]
    if not pool or len(voi) == len(reference.core):
        pool = list(reference.core)
    if not 1 <= seed_size <= len(pool):
        raise EvaluationError(f"seed_size={seed_size} exceeds the {len(pool)} available core vertices")
    seed_sets = []
    for r in range(n_seed_sets):
        rng = rng_for(master_seed, 'seed-set', r)
        picks = rng.choice(len(pool), size=seed_size, replace=False)
        seed_sets.append(tuple(pool[i] for i in sorted(picks)))
    return seed_sets

def _run_replicate(regime: Regime, replicate: int, seeds: Tuple[Hashable, ...], voi: Tuple[Hashable, ...],
                   cfg: NominationConfig, voi_mode: str, obfuscation_seed: int) -> ReplicateResult:
    pair = regime.build(seeds)
    fitted = NominationPipeline(cfg).fit(pair, seeds)
    candidates = fitted.candidates(cfg.exclude_seeds)
    obfuscation = Obfuscation.fresh(pair.g2.labels, np.random.default_rng(obfuscation_seed),
                                    forbidden=pair.g1.labels)
    if voi_mode == 'sweep':
        ranks = fitted.lone_ranks(voi, cfg.exclude_seeds, obfuscation)
    else:
        present = [v for v in voi if v in pair.correspondence]
        ranks = {v: None for v in voi}
        if present:
            ranked = fitted.nominate(present, cfg.exclude_seeds, obfuscation)
            ranks.update({v: ranked.rank_of(obfuscation[pair.correspondence[v]]) for v in present})
    return ReplicateResult(regime.name, replicate, seeds, ranks, len(candidates))

def monte_carlo_harness(regimes: Sequence[Regime], n_seed_sets: int, seed_size: int,
                        cfg: Optional[NominationConfig] = None, master_seed: int = 0,
                        voi_mode: str = 'sweep', x_max: Optional[int] = None,
                        loss_ks: Sequence[int] = DEFAULT_LOSS_KS, n_jobs: int = 1,
                        seed_sets: Optional[Sequence[Tuple[Hashable, ...]]] = None) -> EvalReport:
    """
    Run the nomination pipeline over seed sets and regimes.

    Seed sets are fresh per replicate and shared by every regime of that
    replicate. Seeds never act as vertices of interest.

    Args:
        regimes: Regimes to compare; the first one defines the core and V*
        n_seed_sets: Number of replicates
        seed_size: Seeds per replicate
        cfg: Pipeline settings; each replicate gets its own derived random_state
        master_seed: Master seed
        voi_mode: 'sweep' (each vertex of interest alone) or 'joint'
        x_max: Curve length; defaults to the longest candidate list
        loss_ks: k values for the loss tables
        n_jobs: joblib workers
        seed_sets: Precomputed seed sets (overrides n_seed_sets)

    Returns:
        The evaluation report
    """
    if not regimes:
        raise EvaluationError("At least one regime is required")
    if voi_mode not in VOI_MODES:
        raise EvaluationError(f"voi_mode must be one of {VOI_MODES}, got {voi_mode!r}")
    cfg = cfg or NominationConfig()
    reference = regimes[0].pair
    if seed_sets is None:
        seed_sets = draw_seed_sets(reference, n_seed_sets, seed_size, master_seed)
    seed_sets = [tuple(s) for s in seed_sets]

    jobs = []
    excluded = 0
    for r, seeds in enumerate(seed_sets):
        seed_set = set(seeds)
        voi = tuple(v for v in reference.voi if v not in seed_set)
        excluded += len(reference.voi) - len(voi)
        replicate_cfg = replace(cfg, random_state=derive_seed(master_seed, 'gmm', r))
        obfuscation_seed = derive_seed(master_seed, 'obfuscation', r)
        for regime in regimes:
            jobs.append((regime, r, seeds, voi, replicate_cfg, obfuscation_seed))

    logger.info(f"Running {len(seed_sets)} replicates x {len(regimes)} regimes ({voi_mode} mode)")
    results: List[ReplicateResult] = Parallel(n_jobs=n_jobs, prefer='threads')(
        delayed(_run_replicate)(regime, r, seeds, voi, replicate_cfg, voi_mode, obfuscation_seed)
        for regime, r, seeds, voi, replicate_cfg, obfuscation_seed in jobs
    )

    if x_max is None:
        x_max = max(result.candidates for result in results)
    curves, losses, unranked = {}, {}, {}
    for regime in regimes:
        mine = [result for result in results if result.regime == regime.name]
        rank_maps: List[RankMap] = [result.ranks for result in mine]
        counts = [result.candidates for result in mine]
        curves[regime.name] = performance_curve(rank_maps, x_max, counts)
        losses[regime.name] = loss_table(rank_maps, counts, loss_ks)
        unranked[regime.name] = sum(1 for ranks in rank_maps for rank in ranks.values() if rank is None)
        if unranked[regime.name]:
            logger.warning(f"Regime {regime.name}: {unranked[regime.name]} counterparts unranked across replicates")

    return EvalReport(
        regimes=[regime.name for regime in regimes],
        curves=curves,
        losses=losses,
        replicates=list(seed_sets),
        results=results,
        excluded_seed_voi=excluded,
        unranked_counterparts=unranked,
    )
