"""
The semidefinite relaxation baseline.
"""
from ris_power_min.sdr.relaxation import SdrRelaxation, solve_relaxation
from ris_power_min.sdr.randomization import extract_rank_one, solve_sdr, draw_candidates
