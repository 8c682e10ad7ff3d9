"""
Configuration manager for vertex-nomination experiments.
Handles loading, overriding and validating experiment settings.
"""

import copy
import json
import os
import re
import logging
import configparser
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Tuple

from adversary import AdversaryConfig, AdversaryError
from models import ConsistencyClassSpec, ModelError, SbmParams
from nomination import NominationConfig, NominationError
from oracle import OracleError, OracleSpec
from regularization import DEFAULT_GRID_VALUES, default_grid
from utils.seeding import derive_seed
from utils.tracking import load_manifest

logger = logging.getLogger(__name__)

MODES = ('simulate', 'real-data', 'oracle', 'sweep', 'nominate')

ENV_OVERRIDES = {
    'VNTOOLS_OUTPUT_DIR': ('run', 'output_dir'),
    'VNTOOLS_MASTER_SEED': ('run', 'master_seed'),
    'VNTOOLS_N_JOBS': ('run', 'n_jobs'),
}

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'run': {
        'mode': 'simulate',
        'output_dir': 'output',
        'master_seed': 0,
        'n_jobs': 1,
    },
    'model': {
        'n': 200,
        'B': [[0.4, 0.3], [0.3, 0.5]],
        'pi': [0.5, 0.5],
        'rho': 0.7,
        'voi_count': None,
    },
    'adversary': {
        'pi_plus': 0.1,
        'pi_minus': 0.1,
        's_plus': 0.8,
        's_minus': 0.8,
        'pair_trials': 'unordered',
    },
    'trim': {
        'regimes': [[0.1, 0.1], [0.1, 0.0], [0.2, 0.2]],
        'grid': list(DEFAULT_GRID_VALUES),
        'semantics': 'prose',
        'sweep': True,
        'sweep_seed_sets': 10,
    },
    'evaluation': {
        'n_seed_sets': 50,
        'seed_size': 10,
        'voi_mode': 'sweep',
        'x_max': None,
        'loss_ks': [1, 5, 10, 15, 20, 30],
    },
    'pipeline': {
        'd': None,
        'k_min': 1,
        'k_max': 9,
        'n_init': 5,
        'covariance_floor_scale': 1e-6,
        'tol': 1e-8,
        'max_iter': 500,
        'pooled': True,
        'exclude_seeds': True,
        'check_monotone': False,
    },
    'data': {
        'edge_list_1': None,
        'edge_list_2': None,
        'correspondence': None,
        'seeds': None,
        'voi': None,
    },
    'oracle': {
        'n': 3,
        'm': 3,
        'core_size': -1,
        'voi': [1],
        'p1': 0.3,
        'p2': 0.3,
        'rho': 0.0,
        'n_schemes': 1000,
        'psi_n': 60,
        'psi_i': 2,
        'psi_p': 0.5,
        'psi_k': 2,
        'psi_nu': 4,
        'psi_draws': 0,
    },
}

DATA_FILES = ('edge_list_1', 'edge_list_2', 'correspondence', 'seeds')

class ConfigError(Exception):
    """Raised when a configuration file or override is invalid."""
    pass

@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Validated settings of one run."""
    mode: str
    output_dir: str
    master_seed: int
    n_jobs: int
    sbm: SbmParams
    rho: float
    voi_count: Optional[int]
    adversary: AdversaryConfig
    trims: Tuple[Tuple[float, float], ...]
    trim_grid: Tuple[Tuple[float, float], ...]
    trim_semantics: str
    run_sweep: bool
    sweep_seed_sets: int
    n_seed_sets: int
    seed_size: int
    voi_mode: str
    x_max: Optional[int]
    loss_ks: Tuple[int, ...]
    nomination: NominationConfig
    data: Dict[str, Any]
    oracle: OracleSpec
    n_schemes: int
    psi: Optional[ConsistencyClassSpec]
    psi_draws: int
    raw: Dict[str, Dict[str, Any]] = field(default_factory=dict)

def coerce_value(raw: str) -> Any:
    """Parse a text value: JSON literals, none/true/false in any case, else the string itself."""
    text = raw.strip()
    lowered = text.lower()
    if lowered in ('none', 'null', ''):
        return None
    if lowered in ('true', 'yes', 'on'):
        return True
    if lowered in ('false', 'no', 'off'):
        return False
    try:
        return json.loads(text)
    except ValueError:
        return text

class ConfigManager:
    def __init__(self, config_path: Optional[str] = None, apply_env: bool = True):
        """
        Initialize the configuration manager.

        Args:
            config_path: Path to an .ini/.cfg or .json file; None uses the defaults
            apply_env: Apply VNTOOLS_* environment overrides
        """
        self.config_path = config_path or '<defaults>'
        self.locations: Dict[Tuple[str, str], str] = {}
        self.config = self._load_config() if config_path else {}
        self._check_known_keys()
        if apply_env:
            self._apply_env()

    @classmethod
    def from_dict(cls, data: Dict[str, Dict[str, Any]], source: str = '<dict>',
                  apply_env: bool = False) -> 'ConfigManager':
        """Build a manager from an already sectioned dictionary."""
        manager = cls(None, apply_env=False)
        manager.config_path = source
        manager.config = copy.deepcopy(data)
        manager.locations = {(s, k): source for s, values in data.items() for k in values}
        manager._check_known_keys()
        if apply_env:
            manager._apply_env()
        return manager

    @classmethod
    def from_manifest(cls, path: str) -> 'ConfigManager':
        """Rebuild the effective configuration recorded in a run manifest."""
        manifest = load_manifest(path)
        if 'config' not in manifest:
            raise ConfigError(f"{path}: manifest has no 'config' entry")
        logger.info(f"Replaying configuration from {path}")
        return cls.from_dict(manifest['config'], source=path)

    def _load_config(self) -> Dict[str, Dict[str, Any]]:
        """
        Load configuration from file.

        Returns:
            The configuration as a sectioned dictionary
        """
        try:
            with open(self.config_path, 'r') as f:
                text = f.read()
        except Exception as e:
            logger.error(f"Failed to load config from {self.config_path}: {e}")
            raise

        if self.config_path.endswith('.json'):
            try:
                data = json.loads(text)
            except ValueError as e:
                raise ConfigError(f"{self.config_path}: invalid JSON: {e}") from e
            if not isinstance(data, dict) or not all(isinstance(v, dict) for v in data.values()):
                raise ConfigError(f"{self.config_path}: expected an object of sections")
            self._index_json_lines(text)
            return data

        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text, source=self.config_path)
        except configparser.Error as e:
            raise ConfigError(f"{self.config_path}: {e}") from e
        self._index_ini_lines(text)
        return {section: {key: coerce_value(value) for key, value in parser.items(section)}
                for section in parser.sections()}

    def _index_ini_lines(self, text: str):
        section = None
        for number, line in enumerate(text.splitlines(), start=1):
            header = re.match(r'^\s*\[([^\]]+)\]', line)
            if header:
                section = header.group(1).strip()
                continue
            entry = re.match(r'^\s*([A-Za-z_][\w]*)\s*[=:]', line)
            if entry and section is not None:
                self.locations[(section, entry.group(1))] = f"{self.config_path}:{number}"

    def _index_json_lines(self, text: str):
        section = None
        for number, line in enumerate(text.splitlines(), start=1):
            entry = re.match(r'^\s*"([^"]+)"\s*:\s*(\{?)', line)
            if not entry:
                continue
            if entry.group(2) and entry.group(1) in DEFAULTS:
                section = entry.group(1)
            elif section is not None:
                self.locations.setdefault((section, entry.group(1)), f"{self.config_path}:{number}")

    def _where(self, section: str, key: str) -> str:
        return self.locations.get((section, key), self.config_path)

    def _check_known_keys(self):
        for section, values in self.config.items():
            if section not in DEFAULTS:
                raise ConfigError(f"{self.config_path}: unknown section [{section}]")
            for key in values:
                if key not in DEFAULTS[section]:
                    raise ConfigError(f"{self._where(section, key)}: unknown key {section}.{key}")

    def _apply_env(self):
        for variable, (section, key) in ENV_OVERRIDES.items():
            value = os.environ.get(variable)
            if value is not None:
                self.config.setdefault(section, {})[key] = coerce_value(value)
                self.locations[(section, key)] = f"${variable}"
                logger.debug(f"Environment override {variable} -> {section}.{key}")

    def apply_overrides(self, assignments: Iterable[str]):
        """
        Apply ``section.key=value`` overrides.

        Raises:
            ConfigError: On a malformed assignment or an unknown key
        """
        for assignment in assignments:
            match = re.match(r'^\s*([A-Za-z_]\w*)\.([A-Za-z_]\w*)\s*=(.*)$', assignment)
            if not match:
                raise ConfigError(f"--set {assignment!r}: expected section.key=value")
            section, key, value = match.groups()
            if section not in DEFAULTS or key not in DEFAULTS[section]:
                raise ConfigError(f"--set {assignment!r}: unknown key {section}.{key}")
            self.config.setdefault(section, {})[key] = coerce_value(value)
            self.locations[(section, key)] = f"--set {assignment}"

    def _section(self, section: str) -> Dict[str, Any]:
        merged = copy.deepcopy(DEFAULTS[section])
        merged.update(self.config.get(section, {}))
        return merged

    def get_run_config(self) -> Dict[str, Any]:
        """Get run-level configuration."""
        return self._section('run')

    def get_model_config(self) -> Dict[str, Any]:
        """Get SBM model configuration."""
        return self._section('model')

    def get_adversary_config(self) -> Dict[str, Any]:
        """Get adversary configuration."""
        return self._section('adversary')

    def get_trim_config(self) -> Dict[str, Any]:
        """Get trimming configuration."""
        return self._section('trim')

    def get_evaluation_config(self) -> Dict[str, Any]:
        """Get Monte Carlo evaluation configuration."""
        return self._section('evaluation')

    def get_pipeline_config(self) -> Dict[str, Any]:
        """Get nomination pipeline configuration."""
        return self._section('pipeline')

    def get_data_config(self) -> Dict[str, Any]:
        """Get input file configuration."""
        return self._section('data')

    def get_oracle_config(self) -> Dict[str, Any]:
        """Get exact-oracle configuration."""
        return self._section('oracle')

    def effective_config(self) -> Dict[str, Dict[str, Any]]:
        """Every section with defaults filled in, as recorded in the run manifest."""
        return {section: self._section(section) for section in DEFAULTS}

    def _fail(self, section: str, key: str, message: str):
        raise ConfigError(f"{self._where(section, key)}: {section}.{key}: {message}")

    def _integer(self, section: str, key: str, value: Any, minimum: Optional[int] = None,
                 optional: bool = False) -> Optional[int]:
        if value is None and optional:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            self._fail(section, key, f"expected an integer, got {value!r}")
        if minimum is not None and value < minimum:
            self._fail(section, key, f"must be at least {minimum}, got {value}")
        return value

    def _number(self, section: str, key: str, value: Any, low: float = None, high: float = None) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self._fail(section, key, f"expected a number, got {value!r}")
        if (low is not None and value < low) or (high is not None and value > high):
            self._fail(section, key, f"must lie in [{low}, {high}], got {value}")
        return float(value)

    def _boolean(self, section: str, key: str, value: Any) -> bool:
        if not isinstance(value, bool):
            self._fail(section, key, f"expected true or false, got {value!r}")
        return value

    def _choice(self, section: str, key: str, value: Any, choices: Tuple[str, ...]) -> str:
        if value not in choices:
            self._fail(section, key, f"must be one of {choices}, got {value!r}")
        return value

    def _pairs(self, section: str, key: str, value: Any) -> Tuple[Tuple[float, float], ...]:
        if not isinstance(value, list) or not all(isinstance(p, list) and len(p) == 2 for p in value):
            self._fail(section, key, f"expected a list of [l, h] pairs, got {value!r}")
        return tuple((self._number(section, key, l, 0, 1), self._number(section, key, h, 0, 1)) for l, h in value)

    def build_experiment_config(self) -> ExperimentConfig:
        """
        Validate every section and build the run configuration.

        Returns:
            The frozen experiment configuration

        Raises:
            ConfigError: Naming the file and line of the offending key
        """
        run = self.get_run_config()
        model = self.get_model_config()
        adversary = self.get_adversary_config()
        trim = self.get_trim_config()
        evaluation = self.get_evaluation_config()
        pipeline = self.get_pipeline_config()
        data = self.get_data_config()
        oracle = self.get_oracle_config()

        mode = self._choice('run', 'mode', run['mode'], MODES)
        master_seed = self._integer('run', 'master_seed', run['master_seed'], 0)
        n_jobs = self._integer('run', 'n_jobs', run['n_jobs'])
        if n_jobs == 0:
            self._fail('run', 'n_jobs', "must be nonzero")
        if not isinstance(run['output_dir'], str) or not run['output_dir']:
            self._fail('run', 'output_dir', f"expected a directory path, got {run['output_dir']!r}")

        try:
            sbm = SbmParams(self._integer('model', 'n', model['n'], 1), model['B'], model['pi'])
        except (ModelError, ValueError, TypeError) as e:
            self._fail('model', 'B', str(e))
        rho = self._number('model', 'rho', model['rho'], 0, 1)
        voi_count = self._integer('model', 'voi_count', model['voi_count'], 1, optional=True)

        try:
            adversary_cfg = AdversaryConfig(
                self._number('adversary', 'pi_plus', adversary['pi_plus'], 0, 1),
                self._number('adversary', 'pi_minus', adversary['pi_minus'], 0, 1),
                self._number('adversary', 's_plus', adversary['s_plus'], 0, 1),
                self._number('adversary', 's_minus', adversary['s_minus'], 0, 1),
                rng_seed=derive_seed(master_seed, 'adversary'),
                pair_trials=adversary['pair_trials'],
            )
        except AdversaryError as e:
            self._fail('adversary', 'pair_trials', str(e))

        trims = self._pairs('trim', 'regimes', trim['regimes'])
        if not isinstance(trim['grid'], list) or not trim['grid']:
            self._fail('trim', 'grid', f"expected a non-empty list of fractions, got {trim['grid']!r}")
        trim_grid = tuple(default_grid([self._number('trim', 'grid', v, 0, 1) for v in trim['grid']]))
        if not trim_grid:
            self._fail('trim', 'grid', "no (l, h) point with l + h < 1")
        semantics = self._choice('trim', 'semantics', trim['semantics'], ('prose', 'literal'))

        k_min = self._integer('pipeline', 'k_min', pipeline['k_min'], 1)
        k_max = self._integer('pipeline', 'k_max', pipeline['k_max'], k_min)
        try:
            nomination = NominationConfig(
                d=self._integer('pipeline', 'd', pipeline['d'], 1, optional=True),
                k_range=tuple(range(k_min, k_max + 1)),
                n_init=self._integer('pipeline', 'n_init', pipeline['n_init'], 1),
                covariance_floor_scale=self._number('pipeline', 'covariance_floor_scale',
                                                    pipeline['covariance_floor_scale'], 0),
                tol=self._number('pipeline', 'tol', pipeline['tol'], 0),
                max_iter=self._integer('pipeline', 'max_iter', pipeline['max_iter'], 1),
                pooled=self._boolean('pipeline', 'pooled', pipeline['pooled']),
                exclude_seeds=self._boolean('pipeline', 'exclude_seeds', pipeline['exclude_seeds']),
                check_monotone=self._boolean('pipeline', 'check_monotone', pipeline['check_monotone']),
                random_state=derive_seed(master_seed, 'gmm'),
            )
        except NominationError as e:
            self._fail('pipeline', 'k_min', str(e))

        voi_mode = self._choice('evaluation', 'voi_mode', evaluation['voi_mode'], ('sweep', 'joint'))
        if not isinstance(evaluation['loss_ks'], list) or not evaluation['loss_ks']:
            self._fail('evaluation', 'loss_ks', f"expected a non-empty list, got {evaluation['loss_ks']!r}")
        loss_ks = tuple(self._integer('evaluation', 'loss_ks', k, 1) for k in evaluation['loss_ks'])

        if mode in ('real-data', 'nominate'):
            for key in DATA_FILES:
                path = data[key]
                if path is None and key == 'seeds' and mode == 'real-data':
                    continue
                if not isinstance(path, str) or not os.path.exists(path):
                    self._fail('data', key, f"file not found: {path!r}")

        try:
            oracle_spec = OracleSpec(
                n=self._integer('oracle', 'n', oracle['n'], 1),
                m=self._integer('oracle', 'm', oracle['m'], 2),
                voi=tuple(oracle['voi'] or ()),
                p1=oracle['p1'],
                p2=oracle['p2'],
                core_size=self._integer('oracle', 'core_size', oracle['core_size'], -1),
                rho=self._number('oracle', 'rho', oracle['rho'], 0, 1),
            )
        except (OracleError, ValueError, TypeError) as e:
            self._fail('oracle', 'voi', str(e))

        psi_draws = self._integer('oracle', 'psi_draws', oracle['psi_draws'], 0)
        if psi_draws == 1:
            self._fail('oracle', 'psi_draws', "needs 0 (skip) or at least 2 draws")
        psi = None
        if psi_draws:
            try:
                psi = ConsistencyClassSpec(
                    self._integer('oracle', 'psi_n', oracle['psi_n'], 1),
                    self._integer('oracle', 'psi_i', oracle['psi_i'], 1),
                    self._number('oracle', 'psi_p', oracle['psi_p'], 0, 1),
                    self._integer('oracle', 'psi_k', oracle['psi_k'], 1),
                    self._integer('oracle', 'psi_nu', oracle['psi_nu'], 1),
                )
            except ModelError as e:
                self._fail('oracle', 'psi_n', str(e))

        cfg = ExperimentConfig(
            mode=mode,
            output_dir=run['output_dir'],
            master_seed=master_seed,
            n_jobs=n_jobs,
            sbm=sbm,
            rho=rho,
            voi_count=voi_count,
            adversary=adversary_cfg,
            trims=trims,
            trim_grid=trim_grid,
            trim_semantics=semantics,
            run_sweep=self._boolean('trim', 'sweep', trim['sweep']),
            sweep_seed_sets=self._integer('trim', 'sweep_seed_sets', trim['sweep_seed_sets'], 1),
            n_seed_sets=self._integer('evaluation', 'n_seed_sets', evaluation['n_seed_sets'], 1),
            seed_size=self._integer('evaluation', 'seed_size', evaluation['seed_size'], 1),
            voi_mode=voi_mode,
            x_max=self._integer('evaluation', 'x_max', evaluation['x_max'], 1, optional=True),
            loss_ks=loss_ks,
            nomination=nomination,
            data=data,
            oracle=oracle_spec,
            n_schemes=self._integer('oracle', 'n_schemes', oracle['n_schemes'], 1),
            psi=psi,
            psi_draws=psi_draws,
            raw=self.effective_config(),
        )
        logger.debug(f"Built {mode} configuration from {self.config_path}")
        return cfg
