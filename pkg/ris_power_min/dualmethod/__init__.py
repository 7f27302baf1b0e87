"""
The dual method: dual SDP, closed-form phase recovery and power control.
"""
from ris_power_min.dualmethod.recovery import DualSolution, recover_phase, recover_directions, closed_form_vectors, \
    project_directions
from ris_power_min.dualmethod.main import solve_dual_method
