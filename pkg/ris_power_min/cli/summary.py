"""
Comparison tables of result files.
"""
import logging
from itertools import permutations
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ris_power_min.cross_section.exceptions import SummaryError
from ris_power_min.cross_section.metrics import count_objects, result_row_counter
from ris_power_min.cross_section.metrics_factory import ObjectCounterTypes
from ris_power_min.model.constants import Method, SolutionStatus
from ris_power_min.util.units import watts_to_dbm

logger = logging.getLogger(__name__)

GROUP_COLUMNS = ['K', 'N', 'sinr_target_db', 'pathloss_exponent', 'deployment', 'phase_bits']
_NUMERIC_COLUMNS = ['K', 'N', 'sinr_target_db', 'pathloss_exponent', 'phase_bits', 'sum_power_w',
                    'ee_bits_per_joule']
_FEASIBLE = {SolutionStatus.OPTIMAL.value, SolutionStatus.FEASIBLE.value}


def read_results(csv_path: Union[str, Path]) -> tuple[pd.DataFrame, int]:
    """
    Reads a result file. Rows with a wrong number of fields or unusable values are skipped.
    :return: the valid rows and the number of skipped rows
    """
    bad_lines: list[list[str]] = []

    def skip(line: list[str]) -> None:
        bad_lines.append(line)

    try:
        rows = pd.read_csv(csv_path, engine='python', on_bad_lines=skip, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as error:
        raise SummaryError(f'Result file {csv_path} is empty') from error

    missing = [column for column in GROUP_COLUMNS + ['method', 'status', 'sum_power_w'] if column not in rows]
    if missing:
        raise SummaryError(f'Result file {csv_path} lacks columns {missing}')

    numeric = rows.copy()
    for column in _NUMERIC_COLUMNS:
        if column in numeric:
            numeric[column] = pd.to_numeric(numeric[column].replace('', np.nan), errors='coerce')
    usable = (numeric['method'].isin([method.value for method in Method])
              & numeric['status'].isin([status.value for status in SolutionStatus])
              & numeric[['K', 'N', 'phase_bits']].notna().all(axis=1))
    feasible = numeric['status'].isin(_FEASIBLE)
    usable &= ~feasible | (numeric['sum_power_w'] > 0)

    skipped = len(bad_lines) + int((~usable).sum())
    if skipped:
        logger.warning('Skipped %s malformed rows of %s', skipped, csv_path)
        count_objects(result_row_counter, ObjectCounterTypes.SKIPPED, skipped)
    return numeric[usable].reset_index(drop=True), skipped


def savings(power: float, reference_power: float) -> float:
    """
    Returns 1 - power / reference_power, the fraction of power saved over the reference.
    """
    return 1 - power / reference_power


def compare_summary(csv_path: Union[str, Path]) -> str:
    """
    Creates a text table per sweep point with the median sum power in dBm, the mean sum power, the median
    energy efficiency and the pairwise savings of the median sum power. Infeasible runs are counted but
    excluded from the statistics.
    :param csv_path: the result file
    :return: the table
    :raises SummaryError: if the file holds no usable row
    """
    rows, skipped = read_results(csv_path)
    if rows.empty:
        raise SummaryError(f'Result file {csv_path} holds no usable row')

    lines = []
    for key, group in rows.groupby(GROUP_COLUMNS, sort=True, dropna=False):
        point = dict(zip(GROUP_COLUMNS, key))
        lines.append('K={K:.0f} N={N:.0f} target={sinr_target_db:.4g} dB alpha={pathloss_exponent:.4g} '
                     'deployment={deployment} bits={phase_bits:.0f}'.format(**point))
        lines.append(f'  {"method":<6} {"runs":>5} {"infeasible":>10} {"failed":>6} {"median dBm":>11} '
                     f'{"mean W":>12} {"median EE":>12}')
        medians = {}
        for method in sorted(group['method'].unique(), key=lambda name: Method(name).order):
            runs = group[group['method'] == method]
            feasible = runs[runs['status'].isin(_FEASIBLE)]
            infeasible = int((runs['status'] == SolutionStatus.INFEASIBLE.value).sum())
            failed = int((runs['status'] == SolutionStatus.NUMERICAL_FAILURE.value).sum())
            if feasible.empty:
                lines.append(f'  {method:<6} {len(runs):>5} {infeasible:>10} {failed:>6} {"-":>11} {"-":>12} '
                             f'{"-":>12}')
                continue
            medians[method] = float(feasible['sum_power_w'].median())
            lines.append(f'  {method:<6} {len(runs):>5} {infeasible:>10} {failed:>6} '
                         f'{watts_to_dbm(medians[method]):>11.3f} {feasible["sum_power_w"].mean():>12.4e} '
                         f'{feasible["ee_bits_per_joule"].median():>12.4e}')
        for method, reference in permutations(medians, 2):
            lines.append(f'  savings {method} over {reference}: '
                         f'{100 * savings(medians[method], medians[reference]):.2f}%')
        lines.append('')
    if skipped:
        lines.append(f'Skipped {skipped} malformed rows')
    return '\n'.join(lines).rstrip('\n') + '\n'
