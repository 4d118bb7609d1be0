#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Emit the 24-bus single-period test case (data/rts24_raw.json).

Reconstruction of the widely used 24-bus reliability test system in its
updated single-area form: 24 buses, 34 lines (double circuits merged), 12
thermal units, and 6 wind farms. The snapshot is one evening hour: system
demand 2650.5 MW (93% of the 2850 MW peak profile) and per-farm wind
availability factors chosen to reproduce a congested north-to-south
operating point. Values are rounded reconstructions, not a copy of any
specific published dataset.
"""
import json
import sys

PEAK_MW = {
    1: 108, 2: 97, 3: 180, 4: 74, 5: 71, 6: 136, 7: 125, 8: 171, 9: 175,
    10: 195, 13: 265, 14: 194, 15: 317, 16: 100, 18: 333, 19: 181, 20: 128,
}
HOUR_FACTOR = 0.93  # evening hour of the daily profile

# from, to, reactance (p.u.), capacity (MW); double circuits merged. The
# 138/230 kV interface ratings (3-24, 9-11, 9-12, 10-11, 10-12) are sized
# so the doubled-demand snapshot import-constrains the southern zone, and
# the hottest southern distribution lines are uprated so the binding
# constraints sit on the interface.
LINES = [
    (1, 2, 0.0146, 175), (1, 3, 0.2253, 175), (1, 5, 0.0907, 175),
    (2, 4, 0.1356, 175), (2, 6, 0.2050, 175), (3, 9, 0.1271, 175),
    (3, 24, 0.0840, 150), (4, 9, 0.1110, 175), (5, 10, 0.0940, 300),
    (6, 10, 0.0642, 300), (7, 8, 0.0652, 175), (8, 9, 0.1762, 300),
    (8, 10, 0.1762, 300), (9, 11, 0.0840, 125), (9, 12, 0.0840, 125),
    (10, 11, 0.0840, 125), (10, 12, 0.0840, 125), (11, 13, 0.0488, 500),
    (11, 14, 0.0426, 500), (12, 13, 0.0488, 500), (12, 23, 0.0985, 500),
    (13, 23, 0.0884, 500), (14, 16, 0.0594, 500), (15, 16, 0.0172, 500),
    (15, 21, 0.0249, 1000), (15, 24, 0.0529, 500), (16, 17, 0.0263, 500),
    (16, 19, 0.0234, 500), (17, 18, 0.0143, 500), (17, 22, 0.1069, 500),
    (18, 21, 0.0132, 1000), (19, 20, 0.0203, 1000), (20, 23, 0.0112, 1000),
    (21, 22, 0.0692, 500),
]

# bus, capacity (MW), marginal cost ($/MWh)
THERMAL = [
    (1, 152, 13.32), (2, 152, 13.32), (7, 350, 20.70), (13, 591, 20.93),
    (15, 60, 26.11), (15, 155, 10.52), (16, 155, 10.52), (18, 400, 6.02),
    (21, 400, 5.47), (22, 300, 0.00), (23, 310, 10.52), (23, 350, 10.89),
]

# bus, installed capacity (MW), availability factor for the snapshot hour
WIND = [
    (3, 200, 0.64), (5, 200, 0.62), (7, 200, 0.43),
    (15, 200, 0.52), (21, 200, 0.68), (23, 200, 0.58),
]

SLACK_BUS = 13  # 1-based


def main(out_path):
    buses = [{"id": b, "demand": round(PEAK_MW.get(b + 1, 0) * HOUR_FACTOR, 3)}
             for b in range(24)]
    lines = [{"id": i, "from": f - 1, "to": t - 1,
              "susceptance": round(1.0 / x, 9), "limit": float(cap)}
             for i, (f, t, x, cap) in enumerate(LINES)]
    generators = []
    for bus, cap, cost in THERMAL:
        generators.append({"id": len(generators), "bus": bus - 1, "cost": cost,
                           "p_max": float(cap), "kind": "thermal"})
    for bus, cap, factor in WIND:
        generators.append({"id": len(generators), "bus": bus - 1, "cost": 0.0,
                           "p_max": round(cap * factor, 3), "kind": "wind"})

    case = {
        "name": "rts24",
        "slack_bus": SLACK_BUS - 1,
        "buses": buses,
        "lines": lines,
        "generators": generators,
    }
    with open(out_path, "w") as fh:
        json.dump(case, fh, indent=2)
        fh.write("\n")
    total = sum(b["demand"] for b in buses)
    print(f"wrote {out_path}: demand {total:.1f} MW, "
          f"{len(lines)} lines, {len(generators)} generators")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/rts24_raw.json")
