#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Print the --add-wind arguments for the 300-bus scenario.

Site selection: in every region, the two highest-demand load buses that
host no generator and have at least two incident branches; 23 sites in
total. Each site's capacity is 0.85x the sum of its adjacent branch
ratings, which is large enough to congest the surrounding corridors once
demand is scaled up.
"""
import re
import sys

CAPACITY_FACTOR = 0.85
N_SITES = 23
REGION_SPAN = 800  # bus-id stride between regions in the synthetic case


def main(case_path):
    text = open(case_path).read()

    def table(name):
        block = re.search(r"mpc\." + name + r" = \[\n(.*?)\n\];", text, re.S).group(1)
        return [[float(v) for v in line.strip().rstrip(";").split("\t")]
                for line in block.split("\n")]

    bus, branch, gen = table("bus"), table("branch"), table("gen")
    order = [int(row[0]) for row in bus]
    dense = {b: i for i, b in enumerate(order)}
    gen_buses = {int(row[0]) for row in gen}

    adjacent_rating = {}
    degree = {}
    for row in branch:
        f, t, rate = int(row[0]), int(row[1]), row[5]
        if rate == 0:
            rate = 10000  # unlimited sentinel
        for b in (f, t):
            adjacent_rating[b] = adjacent_rating.get(b, 0.0) + rate
            degree[b] = degree.get(b, 0) + 1

    by_region = {}
    for row in bus:
        bid = int(row[0])
        by_region.setdefault((bid - 1) // REGION_SPAN, []).append((row[2], bid))

    sites = []
    for region in sorted(by_region):
        candidates = sorted(
            ((demand, b) for demand, b in by_region[region]
             if b not in gen_buses and degree.get(b, 0) >= 2),
            reverse=True)
        sites += [b for _, b in candidates[:2]]
    sites = sites[:N_SITES]

    args = []
    for b in sites:
        capacity = round(CAPACITY_FACTOR * adjacent_rating[b])
        args.append(f"--add-wind {dense[b]}:{capacity}")
    print(" ".join(args))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/ieee300.m")
