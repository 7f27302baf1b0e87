"""
Energy efficiency of a beamforming solution.
"""
import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveFloat

from ris_power_min.model.data import BeamformingSolution, SystemConfig
from ris_power_min.util.units import dbm_to_watts


class EnergyModel(BaseModel):
    """
    Power consumption model of transmitter, users and RIS.

    Attributes
    ----------
    amplifier_inverse_efficiency: mu, the inverse of the power amplifier efficiency
    bs_circuit_power_w: circuit power of the transmitter
    user_circuit_power_w: circuit power of every user
    ris_element_power_w: power of every RIS element
    bandwidth_hz: the bandwidth
    """
    model_config = ConfigDict(frozen=True)

    amplifier_inverse_efficiency: PositiveFloat = 1 / 0.8
    bs_circuit_power_w: PositiveFloat = dbm_to_watts(29)
    user_circuit_power_w: PositiveFloat = dbm_to_watts(5)
    ris_element_power_w: PositiveFloat = dbm_to_watts(5)
    bandwidth_hz: PositiveFloat = 1e6


def total_power_consumption(sum_power_w: float, config: SystemConfig, model: EnergyModel = EnergyModel()) -> float:
    """
    Returns mu P + P_B + K P_k + N K P_R in watts.
    """
    return (model.amplifier_inverse_efficiency * sum_power_w
            + model.bs_circuit_power_w
            + config.num_users * model.user_circuit_power_w
            + config.units_per_user * config.num_users * model.ris_element_power_w)


def energy_efficiency(solution: BeamformingSolution, config: SystemConfig,
                      model: EnergyModel = EnergyModel()) -> float:
    """
    Returns the energy efficiency sum_k B log2(1 + Gamma_k) over the total power consumption in bits per joule.
    The rate uses the SINR targets, which are met with equality by power control.
    """
    if not solution.is_feasible:
        raise ValueError(f'Energy efficiency of a {solution.status.value} solution is undefined')
    rate = model.bandwidth_hz * float(np.sum(np.log2(1 + config.targets)))
    return rate / total_power_consumption(solution.sum_power_w, config, model)
