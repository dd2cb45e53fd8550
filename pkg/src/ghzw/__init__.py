"""Teleportation of one qubit through decohered GHZ and W channels."""

from .analysis import (
    CriticalTime,
    CrossoverInterval,
    average_fidelity_closed,
    average_fidelity_quadrature,
    critical_time,
    fidelity_closed,
    fidelity_simulated,
    monotonicity_switch,
    robustness_crossover,
)
from .decoherence import EnvironmentKind, closed_ghz, closed_single_qubit, closed_w, evolve_rk4
from .teleport import ChannelKind, Scenario, teleport_output

__all__ = [
    "ChannelKind",
    "CriticalTime",
    "CrossoverInterval",
    "EnvironmentKind",
    "Scenario",
    "average_fidelity_closed",
    "average_fidelity_quadrature",
    "closed_ghz",
    "closed_single_qubit",
    "closed_w",
    "critical_time",
    "evolve_rk4",
    "fidelity_closed",
    "fidelity_simulated",
    "monotonicity_switch",
    "robustness_crossover",
    "teleport_output",
]
