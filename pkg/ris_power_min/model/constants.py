"""
Constants and enumerations shared by all solvers.
"""
from enum import Enum

from ris_power_min.util.units import dbm_to_watts

# defaults of the simulation setting
DEFAULT_NUM_USERS = 8
DEFAULT_UNITS_PER_USER = 20
DEFAULT_SINR_TARGET = 2.0
DEFAULT_PATHLOSS_EXPONENT = 3.0
DEFAULT_AREA_SIDE_M = 500.0
DEFAULT_RIS_RADIUS_M = 100.0
DEFAULT_NOISE_POWER_W = dbm_to_watts(-114)
# pathloss at 1 m, i.e. 10^-3.76
PATHLOSS_AT_ONE_METER = 10 ** -3.76
# users closer than this to a transmitter are placed at this distance
MIN_DISTANCE_M = 1.0


class Method(str, Enum):
    """
    Beamforming methods in their canonical reporting order.
    """
    DM = 'DM'
    SDR = 'SDR'
    MRT = 'MRT'
    ZF = 'ZF'

    @property
    def order(self) -> int:
        return list(Method).index(self)


class SolutionStatus(str, Enum):
    OPTIMAL = 'Optimal'
    FEASIBLE = 'Feasible'
    INFEASIBLE = 'Infeasible'
    NUMERICAL_FAILURE = 'NumericalFailure'


class DeploymentKind(str, Enum):
    """
    Centralized: all RIS rows at the transmitter in the area center.
    Distributed: row i on a circle around the center.
    """
    CENTRALIZED = 'centralized'
    DISTRIBUTED = 'distributed'
