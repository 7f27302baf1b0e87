from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from ris_power_min.cli.config import ExperimentConfig, SweepParameter, parse_experiment_config, \
    read_experiment_config
from ris_power_min.cli import runner
from ris_power_min.cli.main import EXIT_OK, EXIT_USAGE, main
from ris_power_min.cli.runner import CSV_COLUMNS, RESULTS_FILE_NAME, SUMMARY_FILE_NAME, create_jobs, \
    run_experiment, trial_seed
from ris_power_min.cli.summary import compare_summary, read_results, savings
from ris_power_min.cross_section.exceptions import ConfigurationError, SummaryError
from ris_power_min.model.constants import DeploymentKind, Method
from ris_power_min.util.units import dbm_to_watts

_SWEEP = """
[system]
num_users = 2
units_per_user = 4
noise_power = -114dBm

[methods]
methods = ZF, MRT

[sweep]
parameter = sinr_target
values = 0dB, 1dB, 2dB, 3dB
trials = 2
"""


def _row(method: str, power: float, status: str = 'Feasible', scenario: str = 'p000-t0000') -> dict:
    return {'scenario_id': scenario, 'seed': 1, 'method': method, 'K': 2, 'N': 4, 'sinr_target_db': 3.0,
            'pathloss_exponent': 3.0, 'deployment': 'centralized', 'phase_bits': 0, 'status': status,
            'sum_power_w': power, 'sum_power_dbm': np.nan, 'ee_bits_per_joule': 1e5, 'iterations': 10,
            'duality_gap_rel': np.nan, 'max_leakage': 0.1}


def _write_results(path: Path, rows: list[dict]) -> Path:
    pd.DataFrame(rows, columns=CSV_COLUMNS).to_csv(path, index=False)
    return path


class TestExperimentConfig:

    def test_defaults(self):
        experiment = parse_experiment_config('')
        assert experiment.methods == tuple(Method)
        assert experiment.trials == 1
        config, bits = experiment.points()[0]
        assert (config.num_users, config.units_per_user, bits) == (8, 20, 0)

    def test_quantities(self):
        experiment = parse_experiment_config('[system]\nnoise_power = -114dBm\nsinr_target = 3dB\n'
                                             '[energy]\namplifier_efficiency = 0.5\nbandwidth = 2MHz\n')
        assert_allclose(experiment.noise_power_w, dbm_to_watts(-114))
        assert_allclose(experiment.sinr_target, 10 ** 0.3)
        assert experiment.energy.amplifier_inverse_efficiency == 2.0
        assert experiment.energy.bandwidth_hz == 2e6

    def test_units_per_user_factor(self):
        experiment = parse_experiment_config('[system]\nnum_users = 4\nunits_per_user = 3K\n'
                                             '[sweep]\nparameter = num_users\nvalues = 2, 4, 8\n')
        assert experiment.units_factor == 3
        assert [(config.num_users, config.units_per_user) for config, _ in experiment.points()] \
            == [(2, 6), (4, 12), (8, 24)]

    def test_sweeps(self):
        experiment = parse_experiment_config(_SWEEP)
        assert experiment.sweep.parameter == SweepParameter.SINR_TARGET
        assert_allclose([config.sinr_targets[0] for config, _ in experiment.points()],
                        [1.0, 10 ** 0.1, 10 ** 0.2, 10 ** 0.3])
        assert experiment.methods == (Method.ZF, Method.MRT)

    def test_deployment_and_bits_sweeps(self):
        deployments = parse_experiment_config('[sweep]\nparameter = deployment\nvalues = centralized, Distributed\n')
        assert [config.deployment.kind for config, _ in deployments.points()] \
            == [DeploymentKind.CENTRALIZED, DeploymentKind.DISTRIBUTED]
        bits = parse_experiment_config('[sweep]\nparameter = phase_bits\nvalues = 0, 1, 3\n')
        assert [value for _, value in bits.points()] == [0, 1, 3]

    @pytest.mark.parametrize('text,line', [
        ('[system]\nnum_users = 2\nsinr_target = loud\n', 3),
        ('[system]\nnum_users = 0\n', 2),
        ('[system]\nnum_users = 2\n\n[methods]\nmethods = DM, QP\n', 5),
        ('[system]\nwidth = 3\n', 2),
        ('[nonsense]\nkey = 1\n', 1),
        ('num_users = 2\n', 1),
        ('[sweep]\nparameter = sinr_target\nvalues = 1, -2\n', 3),
        ('[sweep]\nparameter = sinr_target\n', 2),
        ('[methods]\nmethods = DM, DM\n', 2),
        ('[energy]\namplifier_efficiency = 1.5\n', 2),
    ])
    def test_errors_name_the_line(self, text, line):
        with pytest.raises(ConfigurationError) as info:
            parse_experiment_config(text, 'experiment.ini')
        assert info.value.line == line
        assert str(info.value).startswith(f'experiment.ini:{line}:')

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_experiment_config(tmp_path / 'missing.ini')

    def test_inline_comments(self):
        experiment = parse_experiment_config('[system]\nnum_users = 3   # users\n')
        assert experiment.num_users == 3


class TestJobs:

    def test_trial_seeds_shared_by_points(self):
        jobs = create_jobs(parse_experiment_config(_SWEEP))
        assert len(jobs) == 8
        assert {job.seed for job in jobs if job.trial == 0} == {trial_seed(0, 0)}
        assert trial_seed(0, 0) != trial_seed(0, 1)
        assert trial_seed(0, 1) != trial_seed(1, 1)
        assert jobs[3].scenario_id == 'p001-t0001'


class TestRunExperiment:

    @pytest.fixture
    def experiment(self, tmp_path) -> ExperimentConfig:
        return parse_experiment_config(_SWEEP + f'\n[output]\ndirectory = {tmp_path / "out"}\n')

    def test_rows(self, experiment):
        result = run_experiment(experiment)
        assert len(result.rows) == 4 * 2 * 2
        assert list(result.rows.columns) == CSV_COLUMNS
        assert list(result.rows['method'][:2]) == ['MRT', 'ZF']
        assert result.results_path.name == RESULTS_FILE_NAME
        assert result.summary_path.name == SUMMARY_FILE_NAME
        assert list(pd.read_csv(result.results_path).columns) == CSV_COLUMNS
        assert_allclose(sorted(result.rows['sinr_target_db'].unique()), [0, 1, 2, 3], atol=1e-12)
        assert set(result.rows['status']) <= {'Optimal', 'Feasible', 'Infeasible', 'NumericalFailure'}

    def test_rerun_is_bit_identical(self, experiment, tmp_path):
        first = run_experiment(experiment).results_path.read_bytes()
        other = experiment.model_copy(update={'output_dir': tmp_path / 'again'})
        assert run_experiment(other).results_path.read_bytes() == first

    def test_workers_give_the_same_rows(self, experiment, tmp_path):
        sequential = run_experiment(experiment).rows
        parallel = run_experiment(experiment.model_copy(update={'output_dir': tmp_path / 'parallel'}), workers=2)
        pd.testing.assert_frame_equal(parallel.rows, sequential)

    def test_failing_method_becomes_a_failure_row(self, experiment, monkeypatch):
        def broken(*_args, **_kwargs):
            raise np.linalg.LinAlgError('Eigenvalues did not converge')

        monkeypatch.setattr(runner, 'solve_zf', broken)
        result = run_experiment(experiment)
        assert len(result.rows) == 4 * 2 * 2
        zf_rows = result.rows[result.rows['method'] == 'ZF']
        assert set(zf_rows['status']) == {'NumericalFailure'}
        assert zf_rows['sum_power_w'].isna().all()
        assert result.rows[result.rows['method'] == 'MRT']['sum_power_w'].notna().any()
        assert result.exit_code == 1
        assert result.results_path.exists()


class TestSummary:

    def test_identical_methods_save_nothing(self, tmp_path):
        path = _write_results(tmp_path / 'results.csv', [_row('MRT', 1e-3), _row('ZF', 1e-3)])
        summary = compare_summary(path)
        assert 'savings MRT over ZF: 0.00%' in summary
        assert 'savings ZF over MRT: 0.00%' in summary
        assert 'Skipped' not in summary

    def test_savings(self):
        assert savings(1.0, 4.0) == 0.75

    def test_infeasible_runs_are_counted(self, tmp_path):
        path = _write_results(tmp_path / 'results.csv', [_row('DM', 1e-3), _row('MRT', np.nan, 'Infeasible')])
        rows, skipped = read_results(path)
        assert (len(rows), skipped) == (2, 0)
        line = next(line for line in compare_summary(path).splitlines() if line.strip().startswith('MRT'))
        assert line.split()[1:3] == ['1', '1']

    def test_malformed_rows_are_skipped(self, tmp_path):
        path = _write_results(tmp_path / 'results.csv',
                              [_row('MRT', 1e-3), _row('ZF', 2e-3), _row('QP', 1e-3), _row('ZF', -1.0)])
        with path.open('a', encoding='utf-8') as file:
            file.write('p000-t0001,1,MRT,2,4,3,3,centralized,0,Feasible,1,2,3,4,5,6,7,8\n')
        rows, skipped = read_results(path)
        assert len(rows) == 2
        assert skipped == 3
        assert 'Skipped 3 malformed rows' in compare_summary(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / 'results.csv'
        path.write_text('')
        with pytest.raises(SummaryError):
            compare_summary(path)

    def test_no_usable_rows(self, tmp_path):
        path = _write_results(tmp_path / 'results.csv', [])
        with pytest.raises(SummaryError):
            compare_summary(path)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / 'results.csv'
        path.write_text('method,status\nMRT,Feasible\n')
        with pytest.raises(SummaryError):
            compare_summary(path)


class TestMain:

    def test_run(self, tmp_path, capsys):
        config = tmp_path / 'experiment.ini'
        config.write_text(_SWEEP)
        code = main(['run', str(config), '--output-dir', str(tmp_path / 'out'), '--trials', '1',
                     '--methods', 'mrt'])
        rows = pd.read_csv(tmp_path / 'out' / RESULTS_FILE_NAME)
        assert len(rows) == 4
        assert set(rows['method']) == {'MRT'}
        assert code == (1 if (rows['status'] == 'NumericalFailure').any() else EXIT_OK)
        assert 'MRT' in capsys.readouterr().out

    def test_bad_config(self, tmp_path, capsys):
        config = tmp_path / 'experiment.ini'
        config.write_text('[system]\nnum_users = many\n')
        assert main(['run', str(config)]) == EXIT_USAGE
        assert f'{config}:2:' in capsys.readouterr().err

    def test_bad_method_override(self, tmp_path):
        config = tmp_path / 'experiment.ini'
        config.write_text(_SWEEP)
        assert main(['run', str(config), '--methods', 'QP']) == EXIT_USAGE

    def test_summary(self, tmp_path, capsys):
        path = _write_results(tmp_path / 'results.csv', [_row('MRT', 1e-3), _row('ZF', 2e-3)])
        assert main(['summary', str(path)]) == EXIT_OK
        assert 'savings MRT over ZF: 50.00%' in capsys.readouterr().out

    def test_summary_of_empty_file(self, tmp_path):
        path = tmp_path / 'results.csv'
        path.write_text('')
        assert main(['summary', str(path)]) == EXIT_USAGE

    def test_scaling(self, capsys):
        assert main(['scaling', '8', '32', '--trials', '2000']) == EXIT_OK
        output = capsys.readouterr().out
        assert 'AllOnes' in output
        assert 'fitted exponent Mrt' in output

    def test_usage(self):
        with pytest.raises(SystemExit) as info:
            main(['frobnicate'])
        assert info.value.code == EXIT_USAGE
