"""
Execution of experiments: one job per sweep point and trial, one result row per method and job.

The seed of trial t is SeedSequence(entropy=seed, spawn_key=(t,)).generate_state(1, uint64)[0], so every
sweep point sees the same channel realization in trial t. Rows are sorted by point, trial and method order
before they are written.
"""
import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

from ris_power_min.analysis.energy import energy_efficiency
from ris_power_min.analysis.quantization import CONTINUOUS, quantize_phases
from ris_power_min.baselines.completion import solve_with_phases
from ris_power_min.baselines.mrt import solve_mrt
from ris_power_min.baselines.zf import solve_zf
from ris_power_min.channel.scenario import ScenarioSpec, generate_scenario
from ris_power_min.cli.config import ExperimentConfig
from ris_power_min.cli.summary import compare_summary
from ris_power_min.cross_section.metrics import event_counting, outcome_counting, count_objects, \
    beamforming_run_counter, beamforming_outcome_counter, result_row_counter, get_event_counts, \
    get_outcome_counts
from ris_power_min.cross_section.metrics_factory import ObjectCounterTypes
from ris_power_min.dualmethod.main import solve_dual_method
from ris_power_min.model.constants import Method, SolutionStatus
from ris_power_min.model.data import BeamformingSolution, ChannelSet, SystemConfig
from ris_power_min.model.validations import validate
from ris_power_min.sdr.randomization import solve_sdr
from ris_power_min.util.units import linear_to_db, watts_to_dbm

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['scenario_id', 'seed', 'method', 'K', 'N', 'sinr_target_db', 'pathloss_exponent', 'deployment',
               'phase_bits', 'status', 'sum_power_w', 'sum_power_dbm', 'ee_bits_per_joule', 'iterations',
               'duality_gap_rel', 'max_leakage']
RESULTS_FILE_NAME = 'results.csv'
SUMMARY_FILE_NAME = 'summary.txt'


@dataclass(frozen=True)
class Job:
    point: int
    trial: int
    seed: int
    config: SystemConfig
    phase_bits: int

    @property
    def scenario_id(self) -> str:
        return f'p{self.point:03d}-t{self.trial:04d}'


@dataclass(frozen=True)
class ExperimentResult:
    rows: pd.DataFrame
    results_path: Path
    summary_path: Path

    @property
    def exit_code(self) -> int:
        """
        Zero iff no method run ended in a numerical failure.
        """
        failed = self.rows['status'] == SolutionStatus.NUMERICAL_FAILURE.value
        return 1 if bool(failed.any()) else 0


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)).generate_state(1, np.uint64)[0])


def create_jobs(experiment: ExperimentConfig) -> list[Job]:
    return [Job(point, trial, trial_seed(experiment.seed, trial), config, bits)
            for point, (config, bits) in enumerate(experiment.points())
            for trial in range(experiment.trials)]


@outcome_counting(beamforming_outcome_counter)
@event_counting(beamforming_run_counter)
def run_method(method: Method, channels: ChannelSet, config: SystemConfig, experiment: ExperimentConfig,
               seed: int) -> BeamformingSolution:
    """
    Runs one beamforming method with the solver settings of the experiment.
    """
    if method == Method.DM:
        return solve_dual_method(channels, config, experiment.sdp_tolerance, experiment.sdp_max_iter)
    if method == Method.SDR:
        return solve_sdr(channels, config, experiment.sdr_samples, seed,
                         experiment.sdp_tolerance, experiment.sdp_max_iter)
    if method == Method.MRT:
        return solve_mrt(channels, config)
    return solve_zf(channels, config, experiment.zf_penalty)


def quantized(solution: BeamformingSolution, channels: ChannelSet, config: SystemConfig,
              bits: int) -> BeamformingSolution:
    """
    Rounds the phases of a solution to the specified resolution and repeats the power control.
    """
    if bits == CONTINUOUS or solution.phases is None:
        return solution
    result = solve_with_phases(quantize_phases(solution.phases, bits), channels, config, solution.method,
                               solution.diagnostics)
    dual_objective = solution.diagnostics.get('dual_objective_w')
    if result.is_feasible and dual_objective is not None:
        gap = (result.sum_power_w - dual_objective) / result.sum_power_w
        result = dataclasses.replace(result, diagnostics={**result.diagnostics, 'duality_gap_rel': gap})
    return result


def run_job(job: Job, experiment: ExperimentConfig) -> list[dict[str, Any]]:
    """
    Generates the scenario of the job and runs every method of the experiment on it.
    """
    scenario = generate_scenario(ScenarioSpec.create(job.config, job.seed, experiment.fading_variance))
    rows = []
    for method in experiment.methods:
        try:
            solution = solve_job_method(job, method, scenario.channels, experiment)
        except Exception as error:  # pylint: disable=[W0718]
            logger.error('%s failed on %s: %s: %s', method.value, job.scenario_id, type(error).__name__, error)
            solution = BeamformingSolution.failed(method, SolutionStatus.NUMERICAL_FAILURE)
        rows.append(create_row(job, solution, experiment))
    logger.info('Finished %s', job.scenario_id)
    return rows


def solve_job_method(job: Job, method: Method, channels: ChannelSet,
                     experiment: ExperimentConfig) -> BeamformingSolution:
    """
    Runs, quantizes and validates one method; solutions failing validation become numerical failures.
    """
    solution = quantized(run_method(method, channels, job.config, experiment, job.seed),
                         channels, job.config, job.phase_bits)
    if solution.is_feasible:
        report = validate(solution, job.config, channels)
        if not report.passed:
            logger.warning('%s solution of %s fails validation: %s', method.value, job.scenario_id,
                           report.failed())
            solution = dataclasses.replace(solution, status=SolutionStatus.NUMERICAL_FAILURE)
    return solution


def create_row(job: Job, solution: BeamformingSolution, experiment: ExperimentConfig) -> dict[str, Any]:
    config = job.config
    targets = np.unique(config.targets)
    feasible = solution.is_feasible
    return {
        'scenario_id': job.scenario_id,
        'seed': job.seed,
        'method': solution.method.value,
        'K': config.num_users,
        'N': config.units_per_user,
        'sinr_target_db': linear_to_db(float(targets[0])) if len(targets) == 1 else float('nan'),
        'pathloss_exponent': config.pathloss_exponent,
        'deployment': config.deployment.kind.value,
        'phase_bits': job.phase_bits,
        'status': solution.status.value,
        'sum_power_w': solution.sum_power_w if feasible else float('nan'),
        'sum_power_dbm': watts_to_dbm(solution.sum_power_w) if feasible and solution.sum_power_w > 0
        else float('nan'),
        'ee_bits_per_joule': energy_efficiency(solution, config, experiment.energy) if feasible else float('nan'),
        'iterations': solution.diagnostics.get('iterations', float('nan')),
        'duality_gap_rel': solution.diagnostics.get('duality_gap_rel', float('nan')),
        'max_leakage': solution.diagnostics.get('max_leakage', float('nan')),
    }


def run_experiment(experiment: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    """
    Runs all jobs of an experiment and writes the result rows and their summary to the output directory.
    :param experiment: the experiment
    :param workers: number of worker processes; jobs run in this process if omitted or one
    :return: the rows and the written files
    """
    jobs = create_jobs(experiment)
    logger.info('Running %s jobs with methods %s', len(jobs), [method.value for method in experiment.methods])

    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            batches = list(executor.map(run_job, jobs, [experiment] * len(jobs)))
    else:
        batches = [run_job(job, experiment) for job in jobs]

    rows = pd.DataFrame([row for batch in batches for row in batch], columns=CSV_COLUMNS)
    rows = sort_rows(rows)

    output_dir = Path(experiment.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    results_path = output_dir / RESULTS_FILE_NAME
    rows.to_csv(results_path, index=False, float_format='%.17g')
    count_objects(result_row_counter, ObjectCounterTypes.STORED, len(rows))

    summary_path = output_dir / SUMMARY_FILE_NAME
    summary_path.write_text(compare_summary(results_path), encoding='utf-8')

    logger.info('Wrote %s rows to %s', len(rows), results_path)
    logger.info('Method runs: %s, outcomes: %s',
                {key.value: value for key, value in get_event_counts(beamforming_run_counter,
                                                                     'beamforming_runs').items()},
                {key.value: value for key, value in get_outcome_counts(beamforming_outcome_counter,
                                                                       'beamforming_outcomes').items()})
    return ExperimentResult(rows, results_path, summary_path)


def sort_rows(rows: pd.DataFrame) -> pd.DataFrame:
    order = rows['method'].map(lambda name: Method(name).order)
    keys = rows['scenario_id'].str.extract(r'^p(\d+)-t(\d+)$').astype(int)
    return (rows.assign(_point=keys[0], _trial=keys[1], _order=order)
            .sort_values(['_point', '_trial', '_order'], kind='mergesort')
            .drop(columns=['_point', '_trial', '_order'])
            .reset_index(drop=True))
