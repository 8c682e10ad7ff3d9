"""
Experiment manager for vertex-nomination runs.
Dispatches a validated configuration to the simulate, real-data, sweep,
oracle and nominate modes and records every artifact through a RunTracker.
"""

import logging
import traceback
from dataclasses import asdict
from typing import Hashable, List, Optional, Sequence, Tuple

import pandas as pd

from adversary import (
    AdversaryError,
    contaminated_block_matrix,
    density_law_check,
    realized_block_matrix,
    stratified_densities,
)
from config import ExperimentConfig, __version__
from evaluation import (
    Regime,
    SimulationScenario,
    draw_seed_sets,
    loaded_regimes,
    monte_carlo_harness,
    simulate_scenario,
    standard_regimes,
)
from graphs import Obfuscation, check_scheme_consistency
from models import NominatablePair
from nomination import NominationPipeline
from oracle import (
    bayes_optimal_scheme,
    enumerate_support,
    oracle_report,
    partition_by_isomorphism,
    psi_monte_carlo,
    verify_optimality,
)
from regularization import ModularityGrid, SweepConfig, TrimConfig, sweep_trim_params
from utils.seeding import derive_seed, rng_for
from utils.tracking import RunTracker
from .data_loader import load_pair

logger = logging.getLogger(__name__)

SELECTED_REGIME = 'regularized(selected)'

class ExperimentManager:
    def __init__(self, config: ExperimentConfig, tracker: Optional[RunTracker] = None):
        """
        Initialize the experiment manager.

        Args:
            config: Validated experiment configuration
            tracker: Optional RunTracker; defaults to one on config.output_dir
        """
        self.config = config
        self.tracker = tracker or RunTracker(config.output_dir)

    def run_experiment(self) -> int:
        """
        Run the configured mode and write the manifest.

        Returns:
            0 on success, 1 on failure (partial outputs are removed)
        """
        cfg = self.config
        handlers = {
            'simulate': self.run_simulation,
            'real-data': self.run_real_data,
            'sweep': self.run_sweep,
            'oracle': self.run_oracle,
            'nominate': self.run_nomination,
        }
        logger.info(f"Starting {cfg.mode} run with master seed {cfg.master_seed}")
        try:
            handlers[cfg.mode]()
            self.tracker.save_manifest(cfg.raw, cfg.mode, cfg.master_seed, __version__)
        except Exception as e:
            logger.error(f"{cfg.mode} run failed: {e}")
            logger.debug(f"Traceback: {traceback.format_exc()}")
            self.tracker.discard()
            return 1
        logger.info(f"Finished {cfg.mode} run: {len(self.tracker.artifacts)} artifacts in {cfg.output_dir}")
        return 0

    def _simulate(self) -> SimulationScenario:
        cfg = self.config
        graph_seed = derive_seed(cfg.master_seed, 'graph')
        self.tracker.track_seed('graph', graph_seed)
        self.tracker.track_seed('adversary', cfg.adversary.rng_seed)
        scenario = simulate_scenario(cfg.sbm, cfg.rho, cfg.adversary, graph_seed)
        self.tracker.append_audit('contamination_audit.jsonl', scenario.record.to_audit_dict(
            graph_seed=graph_seed, adversary_seed=cfg.adversary.rng_seed, pair_trials=cfg.adversary.pair_trials,
        ))
        return scenario

    def _write_density_report(self, scenario: SimulationScenario):
        """Stratum densities against the verbatim, two-trial and realized block matrices."""
        cfg = self.config
        adversary = cfg.adversary
        blocks = {label: int(b) for label, b in zip(scenario.g1.labels, scenario.blocks)}
        try:
            densities = stratified_densities(scenario.record, blocks)
            matrices = {
                'verbatim': contaminated_block_matrix(cfg.sbm.B, adversary.s_plus, adversary.s_minus, 'verbatim'),
                'two_trial': contaminated_block_matrix(cfg.sbm.B, adversary.s_plus, adversary.s_minus, 'two_trial'),
                'realized': realized_block_matrix(cfg.sbm.B, adversary.s_plus, adversary.s_minus,
                                                  adversary.pair_trials),
            }
        except AdversaryError as e:
            logger.warning(f"Skipping the stratum density report: {e}")
            return

        frames = []
        for name, matrix in matrices.items():
            check = density_law_check(densities, matrix)
            check.insert(0, 'matrix', name)
            frames.append(check)
            misses = int((~check['within']).sum())
            logger.info(f"Stratum densities vs {name} matrix: {len(check) - misses}/{len(check)} within 3 s.e.")
        self.tracker.write_table('adversary_density.csv', pd.concat(frames, ignore_index=True))

    def _sample_voi(self, pairs: Sequence[NominatablePair]) -> List[NominatablePair]:
        cfg = self.config
        if cfg.voi_count is None:
            return list(pairs)
        core = pairs[0].core
        if cfg.voi_count > len(core):
            raise ValueError(f"voi_count={cfg.voi_count} exceeds the core of {len(core)}")
        picks = rng_for(cfg.master_seed, 'voi').choice(len(core), size=cfg.voi_count, replace=False)
        voi = tuple(core[i] for i in sorted(picks))
        return [pair.with_voi(voi) for pair in pairs]

    def _sweep(self, pair: NominatablePair, seed_sets: Sequence[Tuple[Hashable, ...]]) -> ModularityGrid:
        """Modularity sweep of the pair's second graph with seed counterparts protected."""
        cfg = self.config
        sweep_seed = derive_seed(cfg.master_seed, 'sweep')
        self.tracker.track_seed('sweep', sweep_seed)
        sweep_cfg = SweepConfig(
            d=cfg.nomination.d,
            k_range=cfg.nomination.k_range,
            n_init=cfg.nomination.n_init,
            semantics=cfg.trim_semantics,
            random_state=sweep_seed,
            n_jobs=cfg.n_jobs,
        )
        protected = [[pair.correspondence[s] for s in seeds] for seeds in seed_sets[:cfg.sweep_seed_sets]]
        grid = sweep_trim_params(pair.g2, list(cfg.trim_grid), protected, sweep_cfg)
        self.tracker.write_table('modularity_grid.csv', grid.to_frame())
        return grid

    def _selected_regime(self, grid: ModularityGrid, pair: NominatablePair) -> Optional[Regime]:
        if not any(entry.valid for entry in grid.entries):
            return None
        l, h = grid.argmax
        logger.info(f"Modularity-selected trimming: l={l:g}, h={h:g}")
        return Regime(SELECTED_REGIME, pair, TrimConfig(l, h, semantics=self.config.trim_semantics))

    def _evaluate(self, regimes: List[Regime], seed_sets: Sequence[Tuple[Hashable, ...]]):
        cfg = self.config
        report = monte_carlo_harness(
            regimes,
            n_seed_sets=len(seed_sets),
            seed_size=cfg.seed_size,
            cfg=cfg.nomination,
            master_seed=cfg.master_seed,
            voi_mode=cfg.voi_mode,
            x_max=cfg.x_max,
            loss_ks=cfg.loss_ks,
            n_jobs=cfg.n_jobs,
            seed_sets=seed_sets,
        )
        report.write(self.tracker)
        if report.excluded_seed_voi:
            logger.info(f"Excluded {report.excluded_seed_voi} seed draws from the vertices of interest")
        return report

    def run_simulation(self):
        """Correlated SBM draw, contamination, optional sweep and the regime comparison."""
        cfg = self.config
        scenario = self._simulate()
        self._write_density_report(scenario)
        idealized, contaminated = self._sample_voi([scenario.idealized, scenario.contaminated])
        regimes = standard_regimes(idealized, contaminated, cfg.trims, cfg.trim_semantics)
        seed_sets = draw_seed_sets(idealized, cfg.n_seed_sets, cfg.seed_size, cfg.master_seed)
        if cfg.run_sweep:
            selected = self._selected_regime(self._sweep(contaminated, seed_sets), contaminated)
            if selected is not None:
                regimes.append(selected)
        return self._evaluate(regimes, seed_sets)

    def _load(self) -> Tuple[NominatablePair, Tuple[Hashable, ...]]:
        data = self.config.data
        return load_pair(data['edge_list_1'], data['edge_list_2'], data['correspondence'],
                         data['seeds'], data['voi'])

    def run_real_data(self):
        """Idealized, noisy and trimmed regimes for a loaded pair."""
        cfg = self.config
        pair, seeds = self._load()
        regimes = loaded_regimes(pair, cfg.trims, cfg.trim_semantics)
        if seeds:
            seed_sets = [tuple(seeds)]
        else:
            seed_sets = draw_seed_sets(regimes[0].pair, cfg.n_seed_sets, cfg.seed_size, cfg.master_seed)
        if cfg.run_sweep:
            noisy = regimes[1].pair
            selected = self._selected_regime(self._sweep(noisy, seed_sets), noisy)
            if selected is not None:
                regimes.append(selected)
        return self._evaluate(regimes, seed_sets)

    def run_sweep(self):
        """Modularity sweep alone, on the loaded second graph or a simulated contaminated one."""
        cfg = self.config
        if cfg.data.get('edge_list_2'):
            pair, seeds = self._load()
        else:
            pair, seeds = self._simulate().contaminated, ()
        seed_sets = [tuple(seeds)] if seeds else draw_seed_sets(pair, cfg.sweep_seed_sets, cfg.seed_size,
                                                                cfg.master_seed)
        return self._sweep(pair, seed_sets)

    def run_nomination(self):
        """One nomination list for the loaded pair's vertices of interest."""
        cfg = self.config
        pair, seeds = self._load()
        if not seeds:
            raise ValueError("Nomination needs a seed file")
        nomination_list = NominationPipeline(cfg.nomination).nominate(pair, seeds)
        nomination_list.write_csv(self.tracker.path_for('nomination.csv'))
        logger.info(f"Nominated {len(nomination_list)} candidates")
        return nomination_list

    def _consistency_checks(self, dist, scheme) -> int:
        """Consistency of the optimal scheme on every support pair under two random obfuscations."""
        function = scheme.as_function()
        failures = 0
        for index, pair in enumerate(dist.support):
            rng = rng_for(self.config.master_seed, 'obfuscation', index)
            o1 = Obfuscation.fresh(pair.g2.labels, rng, forbidden=pair.g1.labels)
            o2 = Obfuscation.fresh(pair.g2.labels, rng, forbidden=pair.g1.labels)
            if not check_scheme_consistency(function, pair.g1, pair.g2, dist.voi, o1, o2):
                failures += 1
        return failures

    def run_oracle(self):
        """Exact Bayes-optimal tables, optimality check and the optional block-identifier run."""
        cfg = self.config
        dist = enumerate_support(cfg.oracle)
        partition = partition_by_isomorphism(dist)
        scheme = bayes_optimal_scheme(dist, partition)
        oracle_seed = derive_seed(cfg.master_seed, 'oracle')
        self.tracker.track_seed('oracle', oracle_seed)
        optimality = verify_optimality(dist, partition, cfg.n_schemes, oracle_seed)
        report = oracle_report(dist, partition, scheme, optimality)
        report['consistency_failures'] = self._consistency_checks(dist, scheme)
        if not optimality.holds or report['consistency_failures']:
            logger.warning("The optimal scheme failed an optimality or consistency check")

        if cfg.psi is not None:
            psi_seed = derive_seed(cfg.master_seed, 'psi')
            self.tracker.track_seed('psi', psi_seed)
            result = psi_monte_carlo(cfg.psi, cfg.psi_draws, psi_seed)
            report['block_identifier'] = dict(asdict(result), expected_recall_loss=1 - cfg.psi.k / cfg.psi.xi)

        self.tracker.write_json('oracle.json', report)
        return report
