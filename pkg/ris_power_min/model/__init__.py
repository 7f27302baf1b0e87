"""
Domain types, SINR evaluation, validation and unit conversions shared by all solvers.
"""
from ris_power_min.model.constants import Method, SolutionStatus, DeploymentKind
from ris_power_min.model.data import SystemConfig, Deployment, ChannelSet, PhaseBeamformer, PowerAllocation, \
    BeamformingSolution
from ris_power_min.model.sinr import sinr, effective_gains, inner_products, leakage, max_leakage
from ris_power_min.model.validations import validate, ValidationReport, ValidationCheck
from ris_power_min.util.units import dbm_to_watts, watts_to_dbm
