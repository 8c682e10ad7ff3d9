"""
Tests for the ConfigManager class.
"""

import os
import json

import pytest
from unittest.mock import patch

from config import ConfigError, ConfigManager, coerce_value
from utils.seeding import derive_seed

INI_TEXT = """# experiment
[run]
mode = simulate
master_seed = 7

[model]
n = 100
B = [[0.5, 0.2], [0.2, 0.5]]
rho = 0.6

[pipeline]
d = 3
pooled = no
"""

JSON_TEXT = """{
  "run": {
    "master_seed": 3
  },
  "model": {
    "n": 50,
    "rho": 2
  }
}
"""

def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)

class TestCoerceValue:
    """Test suite for coerce_value."""

    @pytest.mark.parametrize('raw, expected', [
        ('none', None),
        ('', None),
        ('Yes', True),
        ('off', False),
        ('12', 12),
        ('0.25', 0.25),
        ('[[0.1, 0.2]]', [[0.1, 0.2]]),
        ('output/run1', 'output/run1'),
    ])
    def test_values(self, raw, expected):
        """Test literal parsing."""
        assert coerce_value(raw) == expected

class TestConfigManager:
    """Test suite for the ConfigManager class."""

    def test_defaults(self):
        """Test the configuration built from defaults alone."""
        cfg = ConfigManager(apply_env=False).build_experiment_config()

        assert cfg.mode == 'simulate'
        assert cfg.sbm.n == 200
        assert cfg.rho == 0.7
        assert cfg.trims == ((0.1, 0.1), (0.1, 0.0), (0.2, 0.2))
        assert len(cfg.trim_grid) == 36
        assert cfg.nomination.k_range == tuple(range(1, 10))
        assert cfg.nomination.d is None
        assert cfg.adversary.rng_seed == derive_seed(0, 'adversary')
        assert cfg.nomination.random_state == derive_seed(0, 'gmm')
        assert cfg.psi is None
        assert set(cfg.raw) == {'run', 'model', 'adversary', 'trim', 'evaluation', 'pipeline', 'data', 'oracle'}

    def test_load_ini(self, tmp_path):
        """Test reading an INI file."""
        path = _write(tmp_path, 'experiment.ini', INI_TEXT)

        cfg = ConfigManager(path, apply_env=False).build_experiment_config()

        assert cfg.master_seed == 7
        assert cfg.sbm.n == 100
        assert cfg.sbm.B[0, 1] == 0.2
        assert cfg.rho == 0.6
        assert cfg.nomination.d == 3
        assert cfg.nomination.pooled is False
        assert cfg.raw['model']['pi'] == [0.5, 0.5]

    def test_ini_error_names_line(self, tmp_path):
        """Test that a bad value is reported with file and line."""
        path = _write(tmp_path, 'bad.ini', "[run]\nmode = simulate\n\n[model]\nrho = 1.5\n")

        with pytest.raises(ConfigError, match=r'bad\.ini:5: model\.rho'):
            ConfigManager(path, apply_env=False).build_experiment_config()

    def test_json_error_names_line(self, tmp_path):
        """Test line numbers for JSON files."""
        path = _write(tmp_path, 'bad.json', JSON_TEXT)

        with pytest.raises(ConfigError, match=r'bad\.json:7: model\.rho'):
            ConfigManager(path, apply_env=False).build_experiment_config()

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON is a configuration error."""
        path = _write(tmp_path, 'broken.json', '{"run": ')

        with pytest.raises(ConfigError):
            ConfigManager(path, apply_env=False)

    def test_missing_file(self):
        """Test that a missing file is re-raised."""
        with pytest.raises(FileNotFoundError):
            ConfigManager('/nonexistent/experiment.ini', apply_env=False)

    def test_unknown_key(self, tmp_path):
        """Test that unknown keys are rejected with their line."""
        path = _write(tmp_path, 'typo.ini', "[model]\nrh0 = 0.5\n")

        with pytest.raises(ConfigError, match=r'typo\.ini:2: unknown key model\.rh0'):
            ConfigManager(path, apply_env=False)

    def test_unknown_section(self, tmp_path):
        """Test that unknown sections are rejected."""
        path = _write(tmp_path, 'extra.ini', "[plots]\nwidth = 3\n")

        with pytest.raises(ConfigError, match='unknown section'):
            ConfigManager(path, apply_env=False)

    def test_overrides(self):
        """Test section.key=value overrides."""
        manager = ConfigManager(apply_env=False)

        manager.apply_overrides(['model.rho=0.5', 'run.mode=oracle', 'pipeline.k_max=4'])
        cfg = manager.build_experiment_config()

        assert cfg.rho == 0.5
        assert cfg.mode == 'oracle'
        assert cfg.nomination.k_range == (1, 2, 3, 4)

    def test_override_error_names_assignment(self):
        """Test that override errors cite the --set flag."""
        manager = ConfigManager(apply_env=False)
        manager.apply_overrides(['evaluation.seed_size=0'])

        with pytest.raises(ConfigError, match='--set evaluation.seed_size=0'):
            manager.build_experiment_config()

    @pytest.mark.parametrize('assignment', ['model.rho', 'rho=0.5', 'model.zzz=1'])
    def test_bad_overrides(self, assignment):
        """Test malformed and unknown overrides."""
        with pytest.raises(ConfigError):
            ConfigManager(apply_env=False).apply_overrides([assignment])

    def test_environment_overrides(self):
        """Test VNTOOLS_* environment variables."""
        with patch.dict(os.environ, {'VNTOOLS_MASTER_SEED': '42', 'VNTOOLS_OUTPUT_DIR': 'runs/a'}):
            cfg = ConfigManager().build_experiment_config()

        assert cfg.master_seed == 42
        assert cfg.output_dir == 'runs/a'

    def test_environment_error_names_variable(self):
        """Test that a bad environment value names the variable."""
        with patch.dict(os.environ, {'VNTOOLS_N_JOBS': '0'}):
            manager = ConfigManager()

        with pytest.raises(ConfigError, match=r'\$VNTOOLS_N_JOBS'):
            manager.build_experiment_config()

    def test_unknown_mode(self):
        """Test that the mode must be known."""
        manager = ConfigManager(apply_env=False)
        manager.apply_overrides(['run.mode=plot'])

        with pytest.raises(ConfigError, match='run.mode'):
            manager.build_experiment_config()

    def test_real_data_requires_files(self):
        """Test that real-data mode checks its input files."""
        manager = ConfigManager(apply_env=False)
        manager.apply_overrides(['run.mode=real-data'])

        with pytest.raises(ConfigError, match='data.edge_list_1'):
            manager.build_experiment_config()

    def test_real_data_seeds_optional(self, tmp_path):
        """Test that real-data mode runs without a seeds file."""
        files = {key: _write(tmp_path, f"{key}.txt", "a b\n") for key in ('edge_list_1', 'edge_list_2', 'correspondence')}
        manager = ConfigManager.from_dict({'run': {'mode': 'real-data'}, 'data': files})

        cfg = manager.build_experiment_config()

        assert cfg.data['seeds'] is None

    def test_invalid_block_matrix(self):
        """Test that an asymmetric block matrix is rejected."""
        manager = ConfigManager.from_dict({'model': {'B': [[0.1, 0.2], [0.3, 0.1]]}})

        with pytest.raises(ConfigError, match='model.B'):
            manager.build_experiment_config()

    def test_invalid_trim_regime(self):
        """Test that trim regimes must be [l, h] pairs."""
        manager = ConfigManager.from_dict({'trim': {'regimes': [[0.1]]}})

        with pytest.raises(ConfigError, match='trim.regimes'):
            manager.build_experiment_config()

    def test_psi_draws(self):
        """Test the block-identifier settings."""
        single = ConfigManager.from_dict({'oracle': {'psi_draws': 1}})
        with pytest.raises(ConfigError, match='oracle.psi_draws'):
            single.build_experiment_config()

        cfg = ConfigManager.from_dict({'oracle': {'psi_draws': 10}}).build_experiment_config()
        assert cfg.psi.xi == 4
        assert cfg.psi_draws == 10

    def test_oracle_too_large(self):
        """Test that oracle sizes above the cap are rejected."""
        manager = ConfigManager.from_dict({'oracle': {'n': 6}})

        with pytest.raises(ConfigError, match='oracle'):
            manager.build_experiment_config()

    def test_from_manifest(self, tmp_path):
        """Test replaying the configuration of a manifest."""
        original = ConfigManager.from_dict({'model': {'rho': 0.3}, 'run': {'master_seed': 9}})
        manifest = {'config': original.effective_config(), 'mode': 'simulate'}
        path = _write(tmp_path, 'manifest.json', json.dumps(manifest))

        cfg = ConfigManager.from_manifest(path).build_experiment_config()

        assert cfg.rho == 0.3
        assert cfg.master_seed == 9
        assert cfg.raw == original.effective_config()

    def test_from_manifest_without_config(self, tmp_path):
        """Test that a manifest must carry its configuration."""
        path = _write(tmp_path, 'manifest.json', json.dumps({'mode': 'simulate'}))

        with pytest.raises(ConfigError):
            ConfigManager.from_manifest(path)
