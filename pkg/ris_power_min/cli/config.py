"""
Experiment configuration files.

A configuration is an INI-style text file with the sections below. Every key is optional; quantities accept
SI and dB suffixes, e.g. '-114dBm', '3dB', '1MHz' or '500m'.

    [system]
    num_users = 8
    units_per_user = 20          # or '3K' for three elements per user
    noise_power = -114dBm
    sinr_target = 3dB
    pathloss_exponent = 3
    area_side = 500m

    [scenario]
    seed = 0
    fading_variance = 1
    deployment = centralized     # or distributed
    ris_radius = 100m

    [methods]
    methods = DM, SDR, MRT, ZF
    phase_bits = 0               # 0 for continuous phases
    sdr_samples = 1000
    zf_penalty = 1e3

    [sweep]
    parameter = sinr_target      # sinr_target, pathloss_exponent, units_per_user, num_users, phase_bits, deployment
    values = 1, 2, 4, 8
    trials = 20

    [energy]
    amplifier_efficiency = 0.8
    bs_circuit_power = 29dBm
    user_circuit_power = 5dBm
    ris_element_power = 5dBm
    bandwidth = 1MHz

    [solvers]
    sdp_tolerance = 1e-8
    sdp_max_iter = 200

    [output]
    directory = results
"""
import configparser
import logging
import re
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveFloat, PositiveInt, ValidationError, \
    model_validator
from typing_extensions import Self

from ris_power_min.analysis.energy import EnergyModel
from ris_power_min.cross_section.exceptions import ConfigurationError
from ris_power_min.model.constants import DEFAULT_NUM_USERS, DEFAULT_UNITS_PER_USER, DEFAULT_SINR_TARGET, \
    DEFAULT_PATHLOSS_EXPONENT, DEFAULT_AREA_SIDE_M, DEFAULT_RIS_RADIUS_M, DEFAULT_NOISE_POWER_W, DeploymentKind, \
    Method
from ris_power_min.model.data import Deployment, SystemConfig
from ris_power_min.util.units import parse_quantity

logger = logging.getLogger(__name__)

_SECTION = re.compile(r'^\s*\[([^\]]+)\]')
_KEY = re.compile(r'^\s*([^\s=:#;\[][^=:]*?)\s*[=:]')
_PER_USER = re.compile(r'^\s*(\d+)\s*K\s*$')


class SweepParameter(str, Enum):
    SINR_TARGET = 'sinr_target'
    PATHLOSS_EXPONENT = 'pathloss_exponent'
    UNITS_PER_USER = 'units_per_user'
    NUM_USERS = 'num_users'
    PHASE_BITS = 'phase_bits'
    DEPLOYMENT = 'deployment'

    def parse(self, text: str) -> Union[int, float, DeploymentKind]:
        """
        Parses one sweep value of this parameter.
        """
        if self == SweepParameter.SINR_TARGET:
            return _positive(parse_quantity(text))
        if self == SweepParameter.PATHLOSS_EXPONENT:
            value = parse_quantity(text)
            if value < 0:
                raise ValueError(f'Pathloss exponent must not be negative: {text}')
            return value
        if self == SweepParameter.DEPLOYMENT:
            return DeploymentKind(text.strip().lower())
        value = int(text)
        minimum = 0 if self == SweepParameter.PHASE_BITS else 1
        if value < minimum:
            raise ValueError(f'{self.value} must be at least {minimum}: {text}')
        return value


class Sweep(BaseModel):
    model_config = ConfigDict(frozen=True)

    parameter: SweepParameter
    values: tuple[Any, ...] = Field(min_length=1)

    @model_validator(mode='after')
    def _check_values(self) -> Self:
        for value in self.values:
            self.parameter.parse(str(value.value if isinstance(value, Enum) else value))
        return self


class ExperimentConfig(BaseModel):
    """
    A solver comparison, optionally swept over one parameter.

    Attributes
    ----------
    units_factor: if set, N = units_factor * K at every point and units_per_user is ignored
    methods: the methods to run, at least one
    phase_bits: resolution of the phases, 0 for continuous
    sweep: the swept parameter with its values; a single point without
    trials: number of channel realizations per point
    sdp_tolerance, sdp_max_iter: override the configured SDP settings
    """
    model_config = ConfigDict(frozen=True)

    num_users: PositiveInt = DEFAULT_NUM_USERS
    units_per_user: PositiveInt = DEFAULT_UNITS_PER_USER
    units_factor: Optional[PositiveInt] = None
    noise_power_w: PositiveFloat = DEFAULT_NOISE_POWER_W
    sinr_target: PositiveFloat = DEFAULT_SINR_TARGET
    pathloss_exponent: float = Field(default=DEFAULT_PATHLOSS_EXPONENT, ge=0)
    area_side_m: PositiveFloat = DEFAULT_AREA_SIDE_M
    deployment: DeploymentKind = DeploymentKind.CENTRALIZED
    ris_radius_m: PositiveFloat = DEFAULT_RIS_RADIUS_M
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    fading_variance: PositiveFloat = 1.0
    methods: tuple[Method, ...] = Field(default=tuple(Method), min_length=1)
    phase_bits: NonNegativeInt = 0
    sdr_samples: PositiveInt = 1000
    zf_penalty: PositiveFloat = 1e3
    sweep: Optional[Sweep] = None
    trials: PositiveInt = 1
    energy: EnergyModel = EnergyModel()
    sdp_tolerance: Optional[PositiveFloat] = None
    sdp_max_iter: Optional[PositiveInt] = None
    output_dir: Path = Path('results')

    @model_validator(mode='after')
    def _check_methods(self) -> Self:
        if len(set(self.methods)) != len(self.methods):
            raise ValueError(f'Methods must be unique: {[method.value for method in self.methods]}')
        return self

    def points(self) -> list[tuple[SystemConfig, int]]:
        """
        Returns the system configuration and phase resolution of every sweep point.
        """
        if self.sweep is None:
            return [self.point()]
        return [self.point(**{self.sweep.parameter.value: value}) for value in self.sweep.values]

    def point(self, **overrides: Any) -> tuple[SystemConfig, int]:
        values = {**self.model_dump(include={'num_users', 'units_per_user', 'sinr_target', 'pathloss_exponent',
                                             'deployment', 'phase_bits'}), **overrides}
        num_users = int(values['num_users'])
        units = self.units_factor * num_users if self.units_factor else int(values['units_per_user'])
        config = SystemConfig.create(num_users, units, float(values['sinr_target']),
                                     noise_power_w=self.noise_power_w,
                                     pathloss_exponent=float(values['pathloss_exponent']),
                                     deployment=Deployment(kind=values['deployment'], radius_m=self.ris_radius_m),
                                     area_side_m=self.area_side_m)
        return config, int(values['phase_bits'])


# key -> (field name, parser)
_KEYS: dict[str, dict[str, tuple[str, Callable[[str], Any]]]] = {
    'system': {
        'num_users': ('num_users', int),
        'units_per_user': ('units_per_user', str),
        'noise_power': ('noise_power_w', lambda text: parse_quantity(text, 'W')),
        'sinr_target': ('sinr_target', parse_quantity),
        'pathloss_exponent': ('pathloss_exponent', parse_quantity),
        'area_side': ('area_side_m', lambda text: parse_quantity(text, 'm')),
    },
    'scenario': {
        'seed': ('seed', int),
        'fading_variance': ('fading_variance', parse_quantity),
        'deployment': ('deployment', lambda text: DeploymentKind(text.strip().lower())),
        'ris_radius': ('ris_radius_m', lambda text: parse_quantity(text, 'm')),
    },
    'methods': {
        'methods': ('methods', lambda text: parse_methods(text)),
        'phase_bits': ('phase_bits', int),
        'sdr_samples': ('sdr_samples', int),
        'zf_penalty': ('zf_penalty', parse_quantity),
    },
    'sweep': {
        'parameter': ('sweep_parameter', lambda text: SweepParameter(text.strip())),
        'values': ('sweep_values', lambda text: [value.strip() for value in text.split(',') if value.strip()]),
        'trials': ('trials', int),
    },
    'energy': {
        'amplifier_efficiency': ('amplifier_efficiency', parse_quantity),
        'bs_circuit_power': ('bs_circuit_power_w', lambda text: parse_quantity(text, 'W')),
        'user_circuit_power': ('user_circuit_power_w', lambda text: parse_quantity(text, 'W')),
        'ris_element_power': ('ris_element_power_w', lambda text: parse_quantity(text, 'W')),
        'bandwidth': ('bandwidth_hz', lambda text: parse_quantity(text, 'Hz')),
    },
    'solvers': {
        'sdp_tolerance': ('sdp_tolerance', parse_quantity),
        'sdp_max_iter': ('sdp_max_iter', int),
    },
    'output': {
        'directory': ('output_dir', Path),
    },
}

_ENERGY_FIELDS = {'bs_circuit_power_w', 'user_circuit_power_w', 'ris_element_power_w', 'bandwidth_hz'}


def _positive(value: float) -> float:
    if not value > 0:
        raise ValueError(f'Value must be positive: {value}')
    return value


def parse_methods(text: str) -> tuple[Method, ...]:
    names = [name.strip().upper() for name in text.split(',') if name.strip()]
    if len(set(names)) != len(names):
        raise ValueError(f'methods must be unique: {names}')
    return tuple(Method(name) for name in names)


def read_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Reads an experiment configuration file.
    :param path: the file
    :return: the configuration
    :raises ConfigurationError: with the offending line if the file cannot be parsed or holds invalid values
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as error:
        raise ConfigurationError(path, 0, f'cannot read file: {error}') from error
    return parse_experiment_config(text, path)


def parse_experiment_config(text: str, path: Union[str, Path] = '<string>') -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=('#', ';'))
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except configparser.MissingSectionHeaderError as error:
        raise ConfigurationError(path, error.lineno, 'key outside of a section') from error
    except configparser.ParsingError as error:
        line, content = error.errors[0]
        raise ConfigurationError(path, line, f'cannot parse {content.strip()!r}') from error
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as error:
        raise ConfigurationError(path, error.lineno or 0, error.message) from error

    lines = _line_index(text)
    fields: dict[str, Any] = {}
    anchors: dict[str, int] = {}
    for section in parser.sections():
        if section not in _KEYS:
            raise ConfigurationError(path, lines.get((section, None), 0), f'unknown section [{section}]')
        for key, value in parser.items(section):
            line = lines.get((section, key), 0)
            if key not in _KEYS[section]:
                raise ConfigurationError(path, line, f'unknown key {key!r} in section [{section}]')
            name, parse = _KEYS[section][key]
            try:
                fields[name] = parse(value)
            except ValueError as error:
                raise ConfigurationError(path, line, f'invalid value for {key}: {error}') from error
            anchors[name] = line

    return _create(fields, anchors, path)


def _create(fields: dict[str, Any], anchors: dict[str, int], path: Union[str, Path]) -> ExperimentConfig:
    units = fields.pop('units_per_user', None)
    if units is not None:
        match = _PER_USER.match(units)
        try:
            if match:
                fields['units_factor'] = int(match.group(1))
            else:
                fields['units_per_user'] = int(units)
        except ValueError as error:
            raise ConfigurationError(path, anchors['units_per_user'], f'invalid units_per_user {units!r}') \
                from error
        anchors['units_factor'] = anchors['units_per_user']

    parameter = fields.pop('sweep_parameter', None)
    values = fields.pop('sweep_values', None)
    if (parameter is None) != (values is None):
        line = anchors.get('sweep_parameter', anchors.get('sweep_values', 0))
        raise ConfigurationError(path, line, 'a sweep needs both parameter and values')
    if parameter is not None:
        try:
            fields['sweep'] = Sweep(parameter=parameter, values=tuple(parameter.parse(value) for value in values))
        except (ValueError, ValidationError) as error:
            raise ConfigurationError(path, anchors['sweep_values'], f'invalid sweep values: {error}') from error
        anchors['sweep'] = anchors['sweep_values']

    energy = {name: fields.pop(name) for name in list(fields) if name in _ENERGY_FIELDS}
    if 'amplifier_efficiency' in fields:
        efficiency = fields.pop('amplifier_efficiency')
        if not 0 < efficiency <= 1:
            raise ConfigurationError(path, anchors['amplifier_efficiency'],
                                     f'amplifier efficiency must be in (0, 1], got {efficiency}')
        energy['amplifier_inverse_efficiency'] = 1 / efficiency
    try:
        fields['energy'] = EnergyModel(**energy)
    except ValidationError as error:
        raise ConfigurationError(path, _first_anchor(error, anchors), _reason(error)) from error

    try:
        return ExperimentConfig(**fields)
    except ValidationError as error:
        raise ConfigurationError(path, _first_anchor(error, anchors), _reason(error)) from error


def _line_index(text: str) -> dict[tuple[str, Optional[str]], int]:
    """
    Maps (section, key) and (section, None) to 1-based line numbers.
    """
    index: dict[tuple[str, Optional[str]], int] = {}
    section = None
    for number, line in enumerate(text.splitlines(), start=1):
        if line[:1].isspace() and section is not None:
            continue
        header = _SECTION.match(line)
        if header:
            section = header.group(1).strip()
            index.setdefault((section, None), number)
            continue
        key = _KEY.match(line)
        if key and section is not None:
            index.setdefault((section, key.group(1)), number)
    return index


def _first_anchor(error: ValidationError, anchors: dict[str, int]) -> int:
    for detail in error.errors():
        location = detail.get('loc') or ()
        for name in location:
            if name in anchors:
                return anchors[name]
    return 0


def _reason(error: ValidationError) -> str:
    detail = error.errors()[0]
    location = '.'.join(str(name) for name in detail.get('loc') or ())
    return f'{location}: {detail["msg"]}' if location else detail['msg']
