"""
Phase quantization, energy efficiency and the power scaling law.
"""
from ris_power_min.analysis.quantization import quantize_phases, phase_levels, CONTINUOUS
from ris_power_min.analysis.energy import EnergyModel, energy_efficiency, total_power_consumption
from ris_power_min.analysis.scaling import ScalingMode, ScalingEstimate, scaling_law_trial, scaling_law_exact, \
    printed_mrt_constant, scaling_law_report, fit_scaling_exponent, received_powers
