#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Emit a synthetic 300-bus MATPOWER-style case (data/ieee300.m).

A stand-in test system with the shape of the classic 300-bus case: 300
buses (non-contiguous ids), 411 branches including parallel circuits, 69
in-service generators, polynomial cost rows (some with small quadratic
terms), and a single type-3 slack bus. The network is built from 12
regional meshes joined by a sparse set of corridors, giving it the zonal
structure that congestion studies need. Entirely synthetic; regenerate
with this script only.
"""
import random
import sys

import numpy as np

SEED = 20240601
N_REGIONS = 12
BUSES_PER_REGION = 25
N_BRANCHES = 411
N_GENS = 69

# Region layout on a 4x3 grid; corridors connect grid neighbours.
REGION_GRID = {r: (r % 4, r // 4) for r in range(N_REGIONS)}

# Regional character: (mean demand per load bus MW, cost band $/MWh,
# generation-to-demand ratio). Cheap-generation regions export.
REGION_PROFILE = {
    0: (55, (4, 12), 2.6),   # cheap exporter
    1: (95, (18, 30), 0.7),
    2: (70, (12, 22), 1.1),
    3: (110, (28, 45), 0.4),  # expensive importer
    4: (60, (5, 14), 2.2),   # cheap exporter
    5: (100, (20, 34), 0.6),
    6: (80, (14, 26), 1.0),
    7: (105, (26, 44), 0.5),  # importer
    8: (50, (6, 16), 2.4),   # cheap exporter
    9: (90, (18, 32), 0.8),
    10: (75, (12, 24), 1.2),
    11: (115, (30, 45), 0.35),  # expensive importer
}


def main(out_path):
    rng = random.Random(SEED)

    # Non-contiguous bus ids, grouped by region the way old utility data is.
    bus_ids = []
    for r in range(N_REGIONS):
        base = 1 + r * 800
        ids = sorted(rng.sample(range(base, base + 700), BUSES_PER_REGION))
        bus_ids.append(ids)
    flat_ids = [b for ids in bus_ids for b in ids]

    # Intra-region meshes: random tree plus local chords.
    branches = []  # (from, to, x, rate)
    intra_chords = 7  # per region: 24 tree edges + 7 chords = 31
    for r in range(N_REGIONS):
        ids = bus_ids[r]
        for i in range(1, len(ids)):
            j = rng.randrange(i)
            branches.append((ids[j], ids[i],
                             round(rng.uniform(0.02, 0.22), 4),
                             round(rng.uniform(150, 400))))
        added = 0
        while added < intra_chords:
            a, b = rng.sample(range(len(ids)), 2)
            branches.append((ids[min(a, b)], ids[max(a, b)],
                             round(rng.uniform(0.03, 0.25), 4),
                             round(rng.uniform(150, 350))))
            added += 1

    # Corridors between neighbouring regions: two to three circuits each.
    corridor_pairs = []
    for r, (x, y) in REGION_GRID.items():
        for s, (u, v) in REGION_GRID.items():
            if s <= r:
                continue
            if abs(x - u) + abs(y - v) == 1:
                corridor_pairs.append((r, s))
    for r, s in corridor_pairs:
        circuits = rng.choice([2, 2, 3])
        for _ in range(circuits):
            a = rng.choice(bus_ids[r])
            b = rng.choice(bus_ids[s])
            branches.append((a, b, round(rng.uniform(0.008, 0.05), 4),
                             round(rng.uniform(350, 800))))

    # Pad to the exact branch count with parallel circuits of existing
    # corridors (same bus pair, own reactance), or trim chords if over.
    while len(branches) < N_BRANCHES:
        f, t, x, rate = rng.choice(branches[-len(corridor_pairs) * 2:])
        branches.append((f, t, round(x * rng.uniform(0.9, 1.2), 4), rate))
    del branches[N_BRANCHES:]

    # Demands: four out of five buses carry load.
    demand = {}
    for r in range(N_REGIONS):
        mean_load = REGION_PROFILE[r][0]
        for b in bus_ids[r]:
            demand[b] = round(rng.uniform(0.4, 1.6) * mean_load, 2) \
                if rng.random() < 0.8 else 0.0

    total_demand = sum(demand.values())

    # Generators: capacity shares follow the regional ratios.
    ratio_sum = sum(p[2] * len(bus_ids[r]) for r, p in REGION_PROFILE.items())
    gens = []  # (bus, pmax, cost)
    region_caps = {}
    for r in range(N_REGIONS):
        mean_load, (c_lo, c_hi), ratio = REGION_PROFILE[r]
        region_demand = sum(demand[b] for b in bus_ids[r])
        region_caps[r] = ratio * region_demand
    cap_total = sum(region_caps.values())
    scale = 1.35 * total_demand / cap_total
    gens_left = N_GENS
    for r in range(N_REGIONS):
        n_units = max(2, round(N_GENS * region_caps[r] / cap_total))
        n_units = min(n_units, gens_left - 2 * (N_REGIONS - 1 - r))
        gens_left -= n_units
        c_lo, c_hi = REGION_PROFILE[r][1]
        buses = rng.sample(bus_ids[r], n_units)
        unit_cap = region_caps[r] * scale / n_units
        for b in buses:
            gens.append((b, round(unit_cap * rng.uniform(0.6, 1.5), 1),
                         round(rng.uniform(c_lo, c_hi), 2)))
    while len(gens) < N_GENS:
        r = rng.randrange(N_REGIONS)
        c_lo, c_hi = REGION_PROFILE[r][1]
        gens.append((rng.choice(bus_ids[r]), round(rng.uniform(80, 300), 1),
                     round(rng.uniform(c_lo, c_hi), 2)))
    del gens[N_GENS:]

    slack_bus = max(gens, key=lambda g: g[1])[0]
    gen_buses = {g[0] for g in gens}

    # Rating pass: run a merit-order dispatch, compute the DC flows it
    # induces, and size each branch a modest headroom above that base flow.
    # The base case is then feasible and uncongested; the +20% demand and
    # wind scenario is what pushes corridors to their limits.
    index = {b: i for i, b in enumerate(flat_ids)}
    n = len(flat_ids)
    injection = np.zeros(n)
    for b, d in demand.items():
        injection[index[b]] -= d
    remaining = total_demand
    for b, pmax, _ in sorted(gens, key=lambda g: g[2]):
        p = min(pmax, remaining)
        injection[index[b]] += p
        remaining -= p
        if remaining <= 0:
            break

    laplacian = np.zeros((n, n))
    for f, t, x, _ in branches:
        i, j = index[f], index[t]
        w = 1.0 / x
        laplacian[i, i] += w
        laplacian[j, j] += w
        laplacian[i, j] -= w
        laplacian[j, i] -= w
    keep = [i for i in range(n) if i != index[slack_bus]]
    theta = np.zeros(n)
    theta[keep] = np.linalg.solve(laplacian[np.ix_(keep, keep)], injection[keep])

    sized = []
    for f, t, x, _ in branches:
        flow = abs((theta[index[f]] - theta[index[t]]) / x)
        rate = max(120.0, flow * rng.uniform(1.12, 1.45))
        sized.append((f, t, x, round(rate)))
    branches = sized

    # A few lightly loaded rows get a zero rating ("unlimited" in the
    # source data convention).
    light = sorted(range(len(branches)), key=lambda i: branches[i][3])[:3]
    for idx in light:
        f, t, x, _ = branches[idx]
        branches[idx] = (f, t, x, 0)

    rows = []
    rows.append("function mpc = ieee300syn")
    rows.append("% Synthetic 300-bus test system: 12 regional meshes joined")
    rows.append("% by corridors; shaped like the classic 300-bus case (300")
    rows.append("% buses, 411 branches, 69 generators). Generated by")
    rows.append("% scripts/make_ieee300.py; edit the script, not this file.")
    rows.append("mpc.version = '2';")
    rows.append("mpc.baseMVA = 100;")

    rows.append("mpc.bus = [")
    for b in flat_ids:
        bus_type = 3 if b == slack_bus else (2 if b in gen_buses else 1)
        rows.append(f"\t{b}\t{bus_type}\t{demand[b]}\t0\t0\t0\t1\t1\t0\t138\t1\t1.06\t0.94;")
    rows.append("];")

    rows.append("mpc.gen = [")
    for b, pmax, _ in gens:
        rows.append(f"\t{b}\t0\t0\t300\t-300\t1\t100\t1\t{pmax}\t0;")
    rows.append("];")

    rows.append("mpc.branch = [")
    for f, t, x, rate in branches:
        r_ohm = round(x * 0.12, 5)
        rows.append(f"\t{f}\t{t}\t{r_ohm}\t{x}\t0\t{rate}\t0\t0\t0\t0\t1\t-360\t360;")
    rows.append("];")

    rows.append("mpc.gencost = [")
    for i, (_, _, cost) in enumerate(gens):
        quad = round(rng.uniform(0.0005, 0.004), 5) if i % 2 == 0 else 0
        rows.append(f"\t2\t0\t0\t3\t{quad}\t{cost}\t0;")
    rows.append("];")

    with open(out_path, "w") as fh:
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {out_path}: {len(flat_ids)} buses, {len(branches)} branches, "
          f"{len(gens)} generators, demand {total_demand:.0f} MW, slack {slack_bus}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/ieee300.m")
