#!/usr/bin/env python3
"""Run the simulator-vs-closed-form validation grid and print a summary.

Exits nonzero if any grid point misses the max(3*stderr, 0.5% relative)
agreement criterion for either estimator or either metric.
"""

import argparse
import sys

from aoilink import EnergyParams, build_report
from aoilink.validation import DEFAULT_MAX_TX_GRID, DEFAULT_P_GRID


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--slots", type=int, default=1_000_000)
    parser.add_argument("--cycles", type=int, default=None)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--es", type=float, default=4.02308)
    parser.add_argument("--et", type=float, default=4.02308)
    args = parser.parse_args()

    report = build_report(
        p_values=DEFAULT_P_GRID,
        max_tx_values=DEFAULT_MAX_TX_GRID,
        energy=EnergyParams(args.es, args.et),
        slots=args.slots,
        cycles=args.cycles if args.cycles is not None else args.slots,
        seed=args.seed,
    )
    for pt in report.points:
        print(
            f"p={pt.p:<4} M={pt.max_tx}  "
            f"exact age {pt.exact_aoi:9.5f}  "
            f"slot {pt.slot.avg_aoi_est:9.5f} ±{pt.slot.stderr_aoi:.5f}  "
            f"cycle {pt.cycle.avg_aoi_est:9.5f} ±{pt.cycle.stderr_aoi:.5f}  "
            f"[{'ok' if pt.slot_pass and pt.cycle_pass else 'MISS'}]"
        )
    print(f"overall: {'pass' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
