"""
Power control for fixed phase beamformers.
"""
from ris_power_min.powerctl.gains import GainTable, build_gain_table, interference_map
from ris_power_min.powerctl.iteration import PowerControlResult, fixed_point, direct_solve
