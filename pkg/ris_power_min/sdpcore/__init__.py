"""
Representation, assembly and solution of the semidefinite programs.
"""
from ris_power_min.sdpcore.problem import SdpProblem, SdpSolution, SdpStatus, LmiBlock, ScalarConstraint, \
    ObjectiveSense, ConstraintSense, scalar_constraint
from ris_power_min.sdpcore.solver import solve
from ris_power_min.sdpcore.assembly import assemble_dual_problem, assemble_sdr_problem, decode_dual, decode_sdr, \
    reference_power
from ris_power_min.sdpcore.store import write_triplets
