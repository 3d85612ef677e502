"""Closed-form age and energy analysis of a retransmitting status-update link.

A source senses a fresh status update, transmits it over an i.i.d. erasure
channel with per-slot failure probability ``p``, and on NACK retransmits the
same packet up to ``max_tx`` times in total before abandoning it and sensing
a new update. Slot length is normalized to 1, so energies per slot are
numerically watts.

This module evaluates the stationary distributions of that process (success
cycle length, transmission count of the delivered packet, sensing count per
cycle), the resulting average age-of-information and average energy
consumption, and the link-budget helpers that derive ``p`` from
Rayleigh-fading parameters.

Everything here is pure and stateless; safe to call from concurrent threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "FixedFailureLink",
    "RayleighLink",
    "LinkSpec",
    "PowerModel",
    "Policy",
    "EnergyParams",
    "MetricPoint",
    "failure_prob",
    "transmit_energy",
    "dbm_to_watts",
    "noise_from_reference_snr",
    "pow_complement",
    "cycle_length_pmf",
    "cycle_length_moments",
    "delivered_tx_count_pmf",
    "delivered_tx_count_mean",
    "sense_count_pmf",
    "sense_count_mean",
    "avg_aoi",
    "avg_energy",
    "evaluate",
]

# Largest double below 1; used to keep derived failure probabilities in [0, 1).
_ONE_BELOW = math.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class FixedFailureLink:
    """Channel described directly by its per-slot failure probability."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"failure probability must be in [0, 1), got {self.p}")


@dataclass(frozen=True)
class RayleighLink:
    """Rayleigh-fading channel; failure probability is the outage probability."""

    rate: float  # spectral efficiency, bits/s/Hz
    noise_power: float  # watts
    tx_power: float  # watts

    def __post_init__(self) -> None:
        if self.rate < 0.0 or not math.isfinite(self.rate):
            raise ValueError(f"rate must be finite and >= 0, got {self.rate}")
        if self.noise_power <= 0.0 or not math.isfinite(self.noise_power):
            raise ValueError(f"noise power must be finite and > 0, got {self.noise_power}")
        if self.tx_power <= 0.0 or not math.isfinite(self.tx_power):
            raise ValueError(f"transmit power must be finite and > 0, got {self.tx_power}")


LinkSpec = Union[FixedFailureLink, RayleighLink]


@dataclass(frozen=True)
class PowerModel:
    """Transmitter power consumption: circuit power plus amplifier drain."""

    circuit_power: float  # watts
    inv_drain_eff: float  # inverse drain efficiency of the power amplifier
    tx_power: float  # watts
    max_power: float  # watts

    def __post_init__(self) -> None:
        if self.circuit_power < 0.0:
            raise ValueError(f"circuit power must be >= 0, got {self.circuit_power}")
        if self.inv_drain_eff <= 0.0:
            raise ValueError(f"inverse drain efficiency must be > 0, got {self.inv_drain_eff}")
        if not 0.0 < self.tx_power <= self.max_power:
            raise ValueError(
                f"transmit power must satisfy 0 < Pt <= Pmax, "
                f"got Pt={self.tx_power}, Pmax={self.max_power}"
            )


@dataclass(frozen=True)
class Policy:
    """Retransmission policy: each packet is transmitted at most max_tx times."""

    max_tx: int

    def __post_init__(self) -> None:
        if self.max_tx < 1:
            raise ValueError(f"max_tx must be >= 1, got {self.max_tx}")


@dataclass(frozen=True)
class EnergyParams:
    """Per-event energies: one sensing charge per generated packet, one
    transmit charge per slot."""

    sense_energy: float  # joules per sensing event
    tx_energy: float  # joules per transmission slot

    def __post_init__(self) -> None:
        if self.sense_energy < 0.0:
            raise ValueError(f"sense energy must be >= 0, got {self.sense_energy}")
        if self.tx_energy < 0.0:
            raise ValueError(f"tx energy must be >= 0, got {self.tx_energy}")


@dataclass(frozen=True)
class MetricPoint:
    """One (average energy, average age) evaluation with its provenance."""

    p: float
    max_tx: int
    avg_aoi: float  # slots
    avg_energy: float  # joules per slot
    link: LinkSpec
    energy: EnergyParams
    tx_power_dbm: float | None = None


def failure_prob(link: LinkSpec) -> float:
    """Per-slot failure probability of the link, in [0, 1).

    A fixed link returns its probability verbatim. A Rayleigh link returns
    the outage probability ``1 - exp(-(2**rate - 1) * noise_power / tx_power)``,
    clamped below 1.0 if the budget is so poor that it rounds up to 1.
    """
    if isinstance(link, FixedFailureLink):
        return link.p
    exponent = (2.0 ** link.rate - 1.0) * link.noise_power / link.tx_power
    return min(-math.expm1(-exponent), _ONE_BELOW)


def transmit_energy(pm: PowerModel) -> float:
    """Energy consumed by one transmission slot: circuit power plus
    amplifier drain (slot length 1)."""
    return pm.circuit_power + pm.inv_drain_eff * pm.tx_power


def dbm_to_watts(dbm: float) -> float:
    """Convert decibel-milliwatts to watts: 10**((dbm - 30) / 10)."""
    if not math.isfinite(dbm):
        raise ValueError(f"dBm value must be finite, got {dbm}")
    return 10.0 ** ((dbm - 30.0) / 10.0)


def noise_from_reference_snr(p_ref: float, snr_ref_db: float) -> float:
    """Noise power implied by a reference transmit power at a reference SNR."""
    if p_ref <= 0.0 or not math.isfinite(p_ref):
        raise ValueError(f"reference power must be finite and > 0, got {p_ref}")
    if not math.isfinite(snr_ref_db):
        raise ValueError(f"reference SNR must be finite, got {snr_ref_db}")
    return p_ref / 10.0 ** (snr_ref_db / 10.0)


def _check_p(p: float) -> None:
    if not 0.0 <= p < 1.0:
        raise ValueError(f"failure probability must be in [0, 1), got {p}")


def _check_max_tx(max_tx: int) -> None:
    if max_tx < 1:
        raise ValueError(f"max_tx must be >= 1, got {max_tx}")


def pow_complement(p: float, max_tx: int) -> tuple[float, float]:
    """Return ``(p**max_tx, 1 - p**max_tx)`` without catastrophic cancellation.

    For max_tx >= 2 the pair is computed from ``max_tx * log(p)`` via
    exp/expm1, which keeps the relative error of both terms near machine
    epsilon even for p close to 1 and very large max_tx.
    """
    _check_p(p)
    _check_max_tx(max_tx)
    if p == 0.0:
        return 0.0, 1.0
    if max_tx == 1:
        return p, 1.0 - p
    mlogp = max_tx * math.log(p)
    return math.exp(mlogp), -math.expm1(mlogp)


def cycle_length_pmf(m: int, p: float) -> float:
    """Probability that a success cycle spans exactly m slots (geometric).

    Out-of-support m (< 1) returns 0 so tail summations stay total.
    """
    _check_p(p)
    if m < 1:
        return 0.0
    return p ** (m - 1) * (1.0 - p)


def cycle_length_moments(p: float) -> tuple[float, float]:
    """Mean and second moment of the success cycle length in slots."""
    _check_p(p)
    q = 1.0 - p
    return 1.0 / q, (1.0 + p) / (q * q)


def delivered_tx_count_pmf(m: int, p: float, max_tx: int) -> float:
    """Probability that the delivered packet needed exactly m transmissions.

    Support is {1, ..., max_tx}; out-of-support m returns 0.
    """
    _, comp = pow_complement(p, max_tx)
    if m < 1 or m > max_tx:
        return 0.0
    return (1.0 - p) / comp * p ** (m - 1)


def delivered_tx_count_mean(p: float, max_tx: int) -> float:
    """Mean number of transmissions spent on the packet that gets through."""
    pm, comp = pow_complement(p, max_tx)
    return 1.0 / (1.0 - p) - max_tx * pm / comp


def sense_count_pmf(l: int, p: float, max_tx: int) -> float:
    """Probability that a success cycle contains exactly l sensing events.

    Each abandoned packet adds one sensing event, so l counts the packets
    tried within the cycle. Out-of-support l (< 1) returns 0.
    """
    _, comp = pow_complement(p, max_tx)
    if l < 1:
        return 0.0
    return p ** ((l - 1) * max_tx) * comp


def sense_count_mean(p: float, max_tx: int) -> float:
    """Mean number of sensing events per success cycle."""
    _, comp = pow_complement(p, max_tx)
    return 1.0 / comp


def avg_aoi(p: float, max_tx: int) -> float:
    """Stationary average age-of-information in slots.

    Renewal argument over success cycles: the mean trapezoid area per cycle
    divided by the mean cycle length collapses to
    ``(3 + p) / (2 (1 - p)) - max_tx * p**max_tx / (1 - p**max_tx)``.
    """
    pm, comp = pow_complement(p, max_tx)
    return (3.0 + p) / (2.0 * (1.0 - p)) - max_tx * pm / comp


def avg_energy(p: float, max_tx: int, energy: EnergyParams) -> float:
    """Stationary average energy per slot.

    Every slot pays the transmit energy; sensing is paid once per generated
    packet, i.e. at rate ``(1 - p) / (1 - p**max_tx)`` per slot.
    """
    _, comp = pow_complement(p, max_tx)
    return (1.0 - p) / comp * energy.sense_energy + energy.tx_energy


def evaluate(
    link: LinkSpec,
    max_tx: int,
    energy: EnergyParams,
    tx_power_dbm: float | None = None,
) -> MetricPoint:
    """Evaluate one parameter combination into a MetricPoint."""
    p = failure_prob(link)
    return MetricPoint(
        p=p,
        max_tx=max_tx,
        avg_aoi=avg_aoi(p, max_tx),
        avg_energy=avg_energy(p, max_tx, energy),
        link=link,
        energy=energy,
        tx_power_dbm=tx_power_dbm,
    )
