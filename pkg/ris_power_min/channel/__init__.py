"""
Seeded channel and geometry generation.
"""
from ris_power_min.channel.scenario import ScenarioSpec, Scenario, generate_scenario, raw_fading, pathloss, \
    ris_row_positions
from ris_power_min.channel.store import write_channels, read_channels
