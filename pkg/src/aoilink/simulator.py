"""Seeded Monte Carlo estimators for the retransmitting status-update link.

Two independent estimators of the average age and average energy:

- :func:`run_slot_sim` replays the link slot by slot: sense a packet, pay
  the transmit energy, draw the channel, act on the ACK/NACK, retransmit up
  to the policy limit.
- :func:`run_cycle_sim` samples success cycles directly: the cycle length is
  geometric, and the delivered packet's transmission count and the number of
  sensing events are deterministic functions of it.

Randomness comes from numpy's default generator (PCG64) seeded with
``SimConfig.seed``. The slot estimator draws ``horizon_slots`` uniforms up
front, one per slot in slot order; the cycle estimator draws one geometric
variate per cycle. Identical configs therefore produce bit-identical
results on the same build of this package.

Timing convention: sensing happens instantly at slot start, the ACK/NACK is
revealed at slot end, and on a success the age resets at slot end to the
number of slots the delivered packet spent in transmission.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .analytic import EnergyParams, LinkSpec, Policy, failure_prob

__all__ = [
    "SimConfig",
    "SimResult",
    "SlotEvent",
    "SlotMachine",
    "run_slot_sim",
    "run_cycle_sim",
    "sample_cycles",
    "age_trace",
    "write_age_trace",
]


@dataclass(frozen=True)
class SimConfig:
    """Configuration shared by both estimators.

    ``horizon_slots`` counts slots for the slot estimator and success cycles
    for the cycle estimator; ``warmup_slots`` is interpreted in the same
    unit and is discarded before averaging. When ``warmup_slots`` is None it
    defaults to 1% of the horizon with a floor of 1000 (capped to a tenth of
    short horizons). Standard errors use batch means over ``batches`` equal
    contiguous windows of ``(horizon - warmup) // batches`` samples; any
    remainder still enters the point estimates.
    """

    link: LinkSpec
    policy: Policy
    energy: EnergyParams
    seed: int
    horizon_slots: int
    warmup_slots: int | None = None
    batches: int = 100

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.horizon_slots < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon_slots}")
        if self.warmup_slots is None:
            default = max(1000, self.horizon_slots // 100)
            if default >= self.horizon_slots:
                default = self.horizon_slots // 10
            object.__setattr__(self, "warmup_slots", default)
        if not 0 <= self.warmup_slots < self.horizon_slots:
            raise ValueError(
                f"warmup must satisfy 0 <= warmup < horizon, "
                f"got warmup={self.warmup_slots}, horizon={self.horizon_slots}"
            )
        if self.batches < 2:
            raise ValueError(f"batches must be >= 2, got {self.batches}")
        if (self.horizon_slots - self.warmup_slots) // self.batches < 1:
            raise ValueError(
                f"horizon - warmup = {self.horizon_slots - self.warmup_slots} "
                f"is too small for {self.batches} batches"
            )


@dataclass(frozen=True)
class SimResult:
    """Monte Carlo estimates with batch-means standard errors and counters."""

    avg_aoi_est: float
    avg_energy_est: float
    stderr_aoi: float
    stderr_energy: float
    slots: int
    packets_generated: int
    successes: int
    seed: int


@dataclass(frozen=True)
class SlotEvent:
    """What happened in one slot of the slot-level state machine."""

    slot: int
    sensed: bool  # a fresh packet was generated (and charged) at slot start
    tx_count: int  # transmissions of the current packet, including this slot
    success: bool
    age_start: int  # age at slot start
    age_end: int  # age at slot end, after any reset


class SlotMachine:
    """Slot-level state machine of the sense/transmit/feedback loop.

    Drive it with one channel outcome per slot (True = failure). Used by the
    trace exporter and as the replayable surface for equivalence tests; the
    bulk simulator inlines the same transitions for speed.
    """

    def __init__(self, max_tx: int):
        if max_tx < 1:
            raise ValueError(f"max_tx must be >= 1, got {max_tx}")
        self.max_tx = max_tx
        self.slot = 0
        self.age = 0
        self.tx_count = 0  # 0 means a fresh packet is sensed next slot

    def step(self, fail: bool) -> SlotEvent:
        sensed = self.tx_count == 0
        self.tx_count += 1
        txc = self.tx_count
        age_start = self.age
        if fail:
            self.age += 1
            if txc == self.max_tx:
                self.tx_count = 0  # abandon; sense a fresh packet next slot
        else:
            # Age at the reception instant equals the slots this packet
            # spent in transmission.
            self.age = txc
            self.tx_count = 0
        event = SlotEvent(
            slot=self.slot,
            sensed=sensed,
            tx_count=txc,
            success=not fail,
            age_start=age_start,
            age_end=self.age,
        )
        self.slot += 1
        return event

    def replay(self, fails: Iterable[bool]) -> list[SlotEvent]:
        return [self.step(bool(f)) for f in fails]


def _slot_failures(link: LinkSpec, seed: int, n: int) -> list[bool]:
    """Draw the per-slot failure outcomes (one uniform per slot)."""
    rng = np.random.default_rng(seed)
    return (rng.random(n) < failure_prob(link)).tolist()


def _batch_stderr(batch_means: np.ndarray) -> float:
    b = batch_means.size
    center = batch_means.mean()
    return float(math.sqrt(float(((batch_means - center) ** 2).sum()) / (b * (b - 1))))


def run_slot_sim(cfg: SimConfig) -> SimResult:
    """Slot-by-slot estimate of average age and average energy.

    Every slot charges the transmit energy; every packet generation
    (including the one at t=0) charges the sensing energy. The age estimate
    is the continuous time integral of the age over the post-warmup slots
    divided by their count; since the age is piecewise linear with unit
    slope, each slot contributes its start age plus one half.
    """
    max_tx = cfg.policy.max_tx
    n = cfg.horizon_slots
    warmup = cfg.warmup_slots
    kept = n - warmup
    width = kept // cfg.batches
    last_mark = warmup + width * cfg.batches
    fails = _slot_failures(cfg.link, cfg.seed, n)

    age = 0
    tx_count = 0
    packets = 0
    successes = 0
    age_sum = 0  # integer sum of post-warmup slot-start ages (exact)
    senses = 0  # post-warmup sensing events
    age_marks: list[int] = []
    sense_marks: list[int] = []
    next_mark = warmup + width

    for i, fail in enumerate(fails):
        if tx_count == 0:
            packets += 1
            if i >= warmup:
                senses += 1
        tx_count += 1
        if i >= warmup:
            age_sum += age
        if fail:
            age += 1
            if tx_count == max_tx:
                tx_count = 0
        else:
            successes += 1
            age = tx_count
            tx_count = 0
        if i + 1 == next_mark:
            age_marks.append(age_sum)
            sense_marks.append(senses)
            next_mark = next_mark + width if next_mark < last_mark else -1

    es, et = cfg.energy.sense_energy, cfg.energy.tx_energy
    batch_age = np.diff(np.asarray(age_marks, dtype=float), prepend=0.0)
    batch_senses = np.diff(np.asarray(sense_marks, dtype=float), prepend=0.0)
    aoi_means = (batch_age + 0.5 * width) / width
    energy_means = et + es * batch_senses / width
    return SimResult(
        avg_aoi_est=(age_sum + 0.5 * kept) / kept,
        avg_energy_est=et + es * (senses / kept),
        stderr_aoi=_batch_stderr(aoi_means),
        stderr_energy=_batch_stderr(energy_means),
        slots=n,
        packets_generated=packets,
        successes=successes,
        seed=cfg.seed,
    )


def sample_cycles(
    link: LinkSpec, policy: Policy, seed: int, cycles: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample per-cycle (length, delivered-packet tx count, sensing count).

    The cycle length is geometric on {1, 2, ...} with success probability
    ``1 - p``. Within a cycle of length y, full groups of max_tx failures are
    abandoned packets, so the delivered packet used ``(y - 1) % max_tx + 1``
    transmissions and the cycle sensed ``ceil(y / max_tx)`` packets.
    """
    if cycles < 1:
        raise ValueError(f"cycle count must be >= 1, got {cycles}")
    rng = np.random.default_rng(seed)
    lengths = rng.geometric(1.0 - failure_prob(link), size=cycles)
    delivered = (lengths - 1) % policy.max_tx + 1
    sensed = (lengths + policy.max_tx - 1) // policy.max_tx
    return lengths, delivered, sensed


def run_cycle_sim(cfg: SimConfig) -> SimResult:
    """Renewal estimate over success cycles.

    ``horizon_slots`` counts cycles here and ``warmup_slots`` leading cycles
    to discard (at least 1, so the previous cycle's delivered-packet age is
    defined). Each cycle contributes the trapezoid area
    ``(prev_delivered + y/2) * y`` to the age numerator and its sensing count
    times the sensing energy to the energy numerator; both are divided by
    the total slots covered.
    """
    if cfg.warmup_slots < 1:
        raise ValueError("cycle estimator needs warmup >= 1 cycle")
    n = cfg.horizon_slots
    w0 = cfg.warmup_slots
    lengths, delivered, sensed = sample_cycles(cfg.link, cfg.policy, cfg.seed, n)

    prev = delivered[w0 - 1 : n - 1].astype(float)
    ylen = lengths[w0:].astype(float)
    areas = (prev + ylen / 2.0) * ylen
    nsense = sensed[w0:].astype(float)

    es, et = cfg.energy.sense_energy, cfg.energy.tx_energy
    total_len = ylen.sum()
    kept = n - w0
    width = kept // cfg.batches
    m = cfg.batches * width
    blen = ylen[:m].reshape(cfg.batches, width).sum(axis=1)
    barea = areas[:m].reshape(cfg.batches, width).sum(axis=1)
    bsense = nsense[:m].reshape(cfg.batches, width).sum(axis=1)

    return SimResult(
        avg_aoi_est=float(areas.sum() / total_len),
        avg_energy_est=float(es * nsense.sum() / total_len + et),
        stderr_aoi=_batch_stderr(barea / blen),
        stderr_energy=_batch_stderr(es * bsense / blen + et),
        slots=int(lengths.sum()),
        packets_generated=int(sensed.sum()),
        successes=n,
        seed=cfg.seed,
    )


def age_trace(cfg: SimConfig, slots: int | None = None) -> list[SlotEvent]:
    """Replay the slot state machine and return the per-slot events.

    Uses the same seed and draw discipline as :func:`run_slot_sim`, so the
    trace describes exactly the run that produced the estimates.
    """
    n = cfg.horizon_slots if slots is None else slots
    if n < 1:
        raise ValueError(f"trace length must be >= 1, got {n}")
    machine = SlotMachine(cfg.policy.max_tx)
    return machine.replay(_slot_failures(cfg.link, cfg.seed, n))


def write_age_trace(cfg: SimConfig, path: str | Path, slots: int | None = None) -> None:
    """Export the age trace as CSV with columns ``slot,age,reset``.

    ``age`` is the age at slot end after any reset; ``reset`` is 1 on
    delivery slots and 0 otherwise.
    """
    events = age_trace(cfg, slots)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["slot", "age", "reset"])
        for ev in events:
            writer.writerow([ev.slot, ev.age_end, int(ev.success)])
