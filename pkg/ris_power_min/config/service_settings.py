from pydantic import BaseModel, PositiveFloat, PositiveInt, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SdpSettings(BaseModel):
    """
    Settings of the conic back end solving all semidefinite programs.
    """
    # relative gap and feasibility tolerance handed to the interior-point method
    tolerance: PositiveFloat = Field(default=1e-8)
    max_iter: PositiveInt = Field(default=200)
    # name of the cvxpy solver
    solver: str = 'CLARABEL'


class PowerControlSettings(BaseModel):
    """
    Settings of the fixed-point power control.
    """
    # stopping threshold on ||p - f(p)|| in watts
    epsilon: PositiveFloat = Field(default=1e-10)
    # per-user stopping threshold on |p_k - f_k(p)| / f_k(p), which bounds the relative SINR shortfall
    relative_tolerance: PositiveFloat = Field(default=1e-7)
    max_iter: PositiveInt = Field(default=10_000)
    # sum power (watts) above which the iteration is declared divergent
    sum_power_cap: PositiveFloat = Field(default=1e6)
    # direct gains below this value count as zero
    degenerate_gain: PositiveFloat = Field(default=1e-30)
    # spectral radius of DC at or above 1 - margin is infeasible
    spectral_radius_margin: PositiveFloat = Field(default=1e-9)


class DualMethodSettings(BaseModel):
    # relative eigenvalue threshold of the pseudoinverse in phase recovery
    pseudo_inverse_threshold: PositiveFloat = Field(default=1e-10)
    # relative duality gap below which a solution counts as certified optimal
    optimal_gap: PositiveFloat = Field(default=1e-6)


class ZeroForcingSettings(BaseModel):
    """
    Settings of the penalized zero-forcing phase design.
    """
    penalty: PositiveFloat = Field(default=1e3)
    tolerance: PositiveFloat = Field(default=1e-10)
    max_iter: PositiveInt = Field(default=1000)


class SdrSettings(BaseModel):
    num_samples: PositiveInt = Field(default=1000)


class ValidationSettings(BaseModel):
    unit_modulus_tolerance: PositiveFloat = Field(default=1e-9)
    sinr_tolerance: PositiveFloat = Field(default=1e-6)


class ScalingSettings(BaseModel):
    # number of Monte Carlo trials drawn at once
    chunk_size: PositiveInt = Field(default=8192)


class ServiceSettings(BaseSettings):
    sdp: SdpSettings = SdpSettings()
    power_control: PowerControlSettings = PowerControlSettings()
    dual_method: DualMethodSettings = DualMethodSettings()
    zero_forcing: ZeroForcingSettings = ZeroForcingSettings()
    sdr: SdrSettings = SdrSettings()
    validation: ValidationSettings = ValidationSettings()
    scaling: ScalingSettings = ScalingSettings()

    model_config = SettingsConfigDict(env_prefix='RISPM__', env_nested_delimiter='__')
