"""
MRT and zero-forcing phase baselines and their completion by power control.
"""
from ris_power_min.baselines.completion import solve_with_phases
from ris_power_min.baselines.mrt import mrt_phase, solve_mrt
from ris_power_min.baselines.zf import ZfState, ZfFeasibility, ZfPhaseResult, zf_feasibility, zf_phase, zf_phases, \
    zf_objective, solve_zf, projector, build_zf_state
