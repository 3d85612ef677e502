"""Shared test helpers.

``reference_trace`` is an independent, deliberately naive interpreter of the
sense/transmit/feedback rules. It tracks absolute slot times and packet
generation instants and derives every age from the definition
``age(t) = t - generation time of the newest delivered update``, rather than
updating ages incrementally, so it serves as an oracle for the package's
state machine.
"""

from __future__ import annotations


def reference_trace(fails, max_tx):
    """Replay channel outcomes (True = failure) through the naive rules.

    Returns (rows, sensing_instants) where each row is a dict with keys
    slot, sensed, tx_count, success, age_start, age_end.
    """
    rows = []
    sensing_instants = []
    now = 0
    in_flight_gen = None  # generation instant of the packet in flight
    in_flight_tx = 0
    newest_delivered_gen = 0  # start as if an update were delivered at t=0
    for fail in fails:
        sensed = in_flight_gen is None
        if sensed:
            in_flight_gen = now
            in_flight_tx = 0
            sensing_instants.append(now)
        in_flight_tx += 1
        age_start = now - newest_delivered_gen
        now += 1
        if not fail:
            newest_delivered_gen = in_flight_gen
            in_flight_gen = None
        elif in_flight_tx >= max_tx:
            in_flight_gen = None  # abandoned
        rows.append(
            {
                "slot": now - 1,
                "sensed": sensed,
                "tx_count": in_flight_tx,
                "success": not fail,
                "age_start": age_start,
                "age_end": now - newest_delivered_gen,
            }
        )
    return rows, sensing_instants


def cycles_from_rows(rows):
    """Per completed success cycle: (length, delivered_tx_count, sense_count)."""
    cycles = []
    length = 0
    senses = 0
    for row in rows:
        length += 1
        senses += int(row["sensed"])
        if row["success"]:
            cycles.append((length, row["tx_count"], senses))
            length = 0
            senses = 0
    return cycles
