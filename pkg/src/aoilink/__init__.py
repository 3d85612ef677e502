"""Energy-age analysis of a status-update link with bounded retransmissions.

Closed-form average age-of-information and average energy consumption for a
sense/transmit/feedback loop over an unreliable channel, two independent
Monte Carlo estimators that validate them, and sweep utilities that emit
energy-age tradeoff curves.
"""

from .analytic import (
    EnergyParams,
    FixedFailureLink,
    LinkSpec,
    MetricPoint,
    Policy,
    PowerModel,
    RayleighLink,
    avg_aoi,
    avg_energy,
    cycle_length_moments,
    cycle_length_pmf,
    dbm_to_watts,
    delivered_tx_count_mean,
    delivered_tx_count_pmf,
    evaluate,
    failure_prob,
    noise_from_reference_snr,
    pow_complement,
    sense_count_mean,
    sense_count_pmf,
    transmit_energy,
)
from .simulator import (
    SimConfig,
    SimResult,
    SlotEvent,
    SlotMachine,
    age_trace,
    run_cycle_sim,
    run_slot_sim,
    sample_cycles,
    write_age_trace,
)
from .sweep import (
    EsSweep,
    MSweep,
    PowerSweep,
    TradeoffCurve,
    dbm_grid,
    es_sweep,
    m_sweep,
    normalize_curve,
    pareto_front,
    power_sweep,
)
from .validation import ValidationPoint, ValidationReport, build_report, within_tolerance

__version__ = "0.1.0"

__all__ = [
    "EnergyParams",
    "FixedFailureLink",
    "LinkSpec",
    "MetricPoint",
    "Policy",
    "PowerModel",
    "RayleighLink",
    "avg_aoi",
    "avg_energy",
    "cycle_length_moments",
    "cycle_length_pmf",
    "dbm_to_watts",
    "delivered_tx_count_mean",
    "delivered_tx_count_pmf",
    "evaluate",
    "failure_prob",
    "noise_from_reference_snr",
    "pow_complement",
    "sense_count_mean",
    "sense_count_pmf",
    "transmit_energy",
    "SimConfig",
    "SimResult",
    "SlotEvent",
    "SlotMachine",
    "age_trace",
    "run_cycle_sim",
    "run_slot_sim",
    "sample_cycles",
    "write_age_trace",
    "EsSweep",
    "MSweep",
    "PowerSweep",
    "TradeoffCurve",
    "dbm_grid",
    "es_sweep",
    "m_sweep",
    "normalize_curve",
    "pareto_front",
    "power_sweep",
    "ValidationPoint",
    "ValidationReport",
    "build_report",
    "within_tolerance",
]
