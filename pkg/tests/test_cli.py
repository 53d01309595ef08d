#!/usr/bin/env python3
"""
Tests for the command-line front-end
"""
import json
import sys
import os

import pandas as pd
import pytest

# Add the parent directory to the path so we can import from src
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, build_parser, main
from src.cli import commands
from src.models import DEFAULT_DOCUMENT, normalize_document
from src.simulation.quadrature import QuadratureError
from src.simulation.reporting import METRICS_COLUMNS, OPTIMAL_COLUMNS, TRADEOFF_COLUMNS

SMALL_RUN = [
    '--set', 'simulation.trials=12',
    '--set', 'deployment.inter_site_distance_m=100',
]
SMALL_SWEEP = SMALL_RUN + [
    '--set', 'sweep.inter_site_distances_m=[100, 200]',
    '--set', 'sweep.ap_beamwidths_deg=[28, 60]',
    '--set', 'sweep.scenarios=["empty-hand", "empty-pocket"]',
]


@pytest.fixture(autouse=True)
def quiet_runtime(monkeypatch):
    monkeypatch.setenv('MMWAVE_SIM_THREADS', '1')
    monkeypatch.setenv('MMWAVE_SIM_LOG_LEVEL', 'WARNING')


def _header(path):
    with open(path, 'r', encoding='utf-8') as handle:
        return handle.readline().rstrip('\n')


# ---------- PARSER ----------
def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_parser_collects_overrides():
    args = build_parser().parse_args(['simulate', '--set', 'a.b=1', '--set', 'c.d=2', '--seed', '5'])
    assert args.command == 'simulate'
    assert args.overrides == ['a.b=1', 'c.d=2']
    assert args.seed == 5 and args.out == '.'


# ---------- BLOCKAGE-PROB ----------
class TestBlockageProb:

    def test_analytic_table(self, tmp_path):
        assert main(['blockage-prob', '--out', str(tmp_path)]) == EXIT_OK
        path = tmp_path / 'blockage_prob.csv'
        assert _header(path) == 'd_a_m,p_self,p_random_one,p_blocked'
        frame = pd.read_csv(path)
        assert len(frame) == 51
        assert (frame['p_blocked'] == frame['p_self']).all()
        assert (frame.loc[frame['d_a_m'] < 7.5, 'p_blocked'] == 0.0).all()

    def test_crowded_is_monotone(self, tmp_path):
        code = main(['blockage-prob', '--out', str(tmp_path),
                     '--set', 'simulation.scenario=crowded-hand', '--set', 'blockage_prob.d_step_m=10'])
        assert code == EXIT_OK
        frame = pd.read_csv(tmp_path / 'blockage_prob.csv')
        assert frame['p_blocked'].is_monotonic_increasing
        assert (frame['p_blocked'] >= frame['p_self']).all()

    def test_validate_columns(self, tmp_path):
        code = main(['blockage-prob', '--validate', '--out', str(tmp_path),
                     '--set', 'blockage_prob.validation_scenes=500',
                     '--set', 'blockage_prob.d_max_m=20', '--set', 'blockage_prob.d_step_m=5'])
        assert code == EXIT_OK
        path = tmp_path / 'blockage_prob.csv'
        assert _header(path) == 'd_a_m,p_self,p_random_one,p_blocked,p_empirical,stderr'
        frame = pd.read_csv(path)
        assert list(frame['d_a_m']) == [0.0, 5.0, 10.0, 15.0, 20.0]
        assert frame.loc[0, 'p_empirical'] == 0.0

    def test_numerical_failure_exit_code(self, tmp_path, monkeypatch):
        def failing(*args, **kwargs):
            raise QuadratureError("budget exhausted")
        monkeypatch.setattr(commands, 'p_random_one', failing)
        assert main(['blockage-prob', '--out', str(tmp_path)]) == EXIT_NUMERICAL


# ---------- SIMULATE ----------
class TestSimulate:

    def test_metrics_csv(self, tmp_path):
        assert main(['simulate', '--out', str(tmp_path)] + SMALL_RUN) == EXIT_OK
        path = tmp_path / 'metrics.csv'
        assert _header(path) == ','.join(METRICS_COLUMNS)
        frame = pd.read_csv(path)
        assert len(frame) == 1
        assert frame.loc[0, 'trials'] == 12 and frame.loc[0, 'scenario'] == 'custom'

    def test_output_is_byte_identical_across_threads(self, tmp_path, monkeypatch):
        first, second = tmp_path / 'one', tmp_path / 'many'
        assert main(['simulate', '--out', str(first), '--seed', '11'] + SMALL_RUN) == EXIT_OK
        monkeypatch.setenv('MMWAVE_SIM_THREADS', '4')
        monkeypatch.setenv('MMWAVE_SIM_CHUNK_TRIALS', '5')
        assert main(['simulate', '--out', str(second), '--seed', '11'] + SMALL_RUN) == EXIT_OK
        assert (first / 'metrics.csv').read_bytes() == (second / 'metrics.csv').read_bytes()

    def test_config_file(self, tmp_path):
        config = tmp_path / 'run.json'
        config.write_text(json.dumps({'simulation': {'trials': 5, 'seed': 3},
                                      'deployment': {'inter_site_distance_m': 200}}))
        assert main(['simulate', '--config', str(config), '--out', str(tmp_path)]) == EXIT_OK
        frame = pd.read_csv(tmp_path / 'metrics.csv')
        assert frame.loc[0, 'delta_m'] == 200.0 and frame.loc[0, 'seed'] == 3


# ---------- SWEEP AND TRADEOFF ----------
def test_sweep_then_tradeoff(tmp_path, capsys):
    assert main(['sweep', '--out', str(tmp_path)] + SMALL_SWEEP) == EXIT_OK
    assert _header(tmp_path / 'sweep.csv') == ','.join(METRICS_COLUMNS)
    assert _header(tmp_path / 'optimal.csv') == ','.join(OPTIMAL_COLUMNS)
    assert len(pd.read_csv(tmp_path / 'sweep.csv')) == 8
    assert len(pd.read_csv(tmp_path / 'optimal.csv')) == 4

    assert main(['tradeoff', '--out', str(tmp_path), '--min-coverage', '0.1']) == EXIT_OK
    assert _header(tmp_path / 'tradeoff.csv') == ','.join(TRADEOFF_COLUMNS)
    output = capsys.readouterr().out
    assert 'empty-hand' in output and 'empty-pocket' in output


def test_sweep_mixes_custom_with_presets(tmp_path, monkeypatch):
    monkeypatch.setenv('MMWAVE_SIM_TABLE_NODES', '256')
    code = main(['simulate', '--out', str(tmp_path)] + SMALL_RUN + [
        '--set', 'simulation.scenario=empty-pocket',
        '--set', 'sweep.scenarios=["custom", "crowded-hand"]',
    ])
    assert code == EXIT_OK
    frame = pd.read_csv(tmp_path / 'metrics.csv')
    assert list(frame['scenario']) == ['custom', 'crowded-hand']


def test_preset_without_sweep_list(tmp_path):
    code = main(['simulate', '--out', str(tmp_path), '--set', 'simulation.scenario=empty-pocket'] + SMALL_RUN)
    assert code == EXIT_OK
    assert list(pd.read_csv(tmp_path / 'metrics.csv')['scenario']) == ['empty-pocket']


def test_tradeoff_without_sweep(tmp_path):
    assert main(['tradeoff', '--out', str(tmp_path)]) == EXIT_CONFIG


# ---------- CONFIGURATION ERRORS ----------
class TestConfigurationErrors:

    def test_unknown_override(self, tmp_path, capsys):
        assert main(['simulate', '--out', str(tmp_path), '--set', 'venue.colour=red']) == EXIT_CONFIG
        assert 'venue.colour' in capsys.readouterr().err

    def test_empty_config_file(self, tmp_path):
        config = tmp_path / 'empty.json'
        config.write_text('')
        assert main(['simulate', '--config', str(config), '--out', str(tmp_path)]) == EXIT_CONFIG

    def test_zero_beamwidth(self, tmp_path, capsys):
        code = main(['simulate', '--out', str(tmp_path), '--set', 'antenna.ap_beamwidth_deg=0'])
        assert code == EXIT_CONFIG
        assert 'Beamwidth must be in (0, 2*pi]' in capsys.readouterr().err

    def test_bad_runtime_setting(self, tmp_path, monkeypatch):
        monkeypatch.setenv('MMWAVE_SIM_CHUNK_TRIALS', '0')
        assert main(['simulate', '--out', str(tmp_path)]) == EXIT_CONFIG


def test_dump_config(capsys):
    assert main(['simulate', '--dump-config', '--seed', '42']) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert normalize_document(document)['simulation']['seed'] == 42
    assert set(document) == set(DEFAULT_DOCUMENT)


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
