"""Simulate photon-mediated CNOT, Toffoli and Fredkin gates on NV-center spins."""

from ._core import (
    DimensionError,
    Gate,
    InputConvention,
    ModeError,
    Netlist,
    NetlistError,
    NormalizationError,
    Normalization,
    ParameterError,
    ReflectionPair,
    WiringError,
    coupling_ratio_for_reflection,
    efficiency_closed_form,
    efficiency_simulated,
    fidelity_closed_form,
    fidelity_simulated,
    gate_circuit,
    gate_spin_count,
    ideal_unitary,
    kappa_from_quality_factor,
    linspace,
    load_netlist,
    parse_netlist,
    reflection_coefficient,
    resonant_reflection,
    run,
    sweep_csv,
)

__all__ = [
    "DimensionError",
    "Gate",
    "InputConvention",
    "ModeError",
    "Netlist",
    "NetlistError",
    "NormalizationError",
    "Normalization",
    "ParameterError",
    "ReflectionPair",
    "WiringError",
    "coupling_ratio_for_reflection",
    "efficiency_closed_form",
    "efficiency_simulated",
    "fidelity_closed_form",
    "fidelity_simulated",
    "gate_circuit",
    "gate_spin_count",
    "ideal_unitary",
    "kappa_from_quality_factor",
    "linspace",
    "load_netlist",
    "parse_netlist",
    "reflection_coefficient",
    "resonant_reflection",
    "run",
    "sweep_csv",
]
