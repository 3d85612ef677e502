#!/usr/bin/env python3
"""Generate the standard energy-age tradeoff datasets as CSV.

Four experiments, written into --outdir for external plotting:

- m_sweep_constant_power.csv: retransmission-limit sweep at several channel
  qualities with fixed transmit power (Es = Et = 4.02308 J).
- es_sweep_constant_power.csv: the same sweep at p = 0.4 rerun for several
  sensing energies, energies normalized per curve by Es + Et.
- power_control_sweep.csv: transmit power from 2 to 20 dBm in 3 dB steps
  under a Rayleigh budget (rate 2 bits/s/Hz, 20 dB reference SNR at 20 dBm),
  one curve per retransmission limit.
- es_sweep_power_control.csv: the power sweep at limit 6 rerun for several
  sensing energies, normalized per curve by Es + (Pc + eta * Pmax).
"""

import argparse
from pathlib import Path

from aoilink import EnergyParams, EsSweep, MSweep, PowerSweep, es_sweep, m_sweep, power_sweep
from aoilink.output import emit_csv

CIRCUIT_POWER = 2.1  # W
INV_DRAIN_EFF = 19.2308
MAX_POWER = 0.1  # W (20 dBm)
ET_REF = CIRCUIT_POWER + INV_DRAIN_EFF * MAX_POWER  # 4.02308 J per slot
ES_LIST = (0.0, 0.5 * ET_REF, ET_REF, 2.0 * ET_REF)


def power_spec(max_tx_list, sense_energy=ET_REF):
    return PowerSweep(
        dbm_min=2.0,
        dbm_max=20.0,
        dbm_step=3.0,
        max_tx_list=max_tx_list,
        rate=2.0,
        snr_ref_db=20.0,
        ref_power_dbm=20.0,
        sense_energy=sense_energy,
        circuit_power=CIRCUIT_POWER,
        inv_drain_eff=INV_DRAIN_EFF,
        max_power=MAX_POWER,
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="tradeoff_curves", help="output directory")
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    max_tx = tuple(range(1, 7))
    datasets = {
        "m_sweep_constant_power.csv": m_sweep(
            MSweep((0.1, 0.2, 0.3, 0.4), max_tx, EnergyParams(ET_REF, ET_REF))
        ),
        "es_sweep_constant_power.csv": es_sweep(
            EsSweep(ES_LIST, MSweep((0.4,), max_tx, EnergyParams(0.0, ET_REF)))
        ),
        "power_control_sweep.csv": power_sweep(power_spec(max_tx)),
        "es_sweep_power_control.csv": es_sweep(EsSweep(ES_LIST, power_spec((6,)))),
    }
    for name, curves in datasets.items():
        path = outdir / name
        path.write_text(emit_csv(curves))
        points = sum(len(curve.points) for curve in curves)
        print(f"wrote {path} ({len(curves)} curves, {points} points)")


if __name__ == "__main__":
    main()
