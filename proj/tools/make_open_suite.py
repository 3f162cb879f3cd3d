#!/usr/bin/env python3
"""Writes the bundled 8x8 open-grid suite: one map and ten scenario files."""

import argparse
import random
from pathlib import Path

WIDTH = HEIGHT = 8


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("out", type=Path)
    parser.add_argument("--scenarios", type=int, default=10)
    parser.add_argument("--agents", type=int, default=8)
    parser.add_argument("--seed", type=int, default=8)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    rows = ["." * WIDTH] * HEIGHT
    (args.out / "open8x8.map").write_text(
        f"type octile\nheight {HEIGHT}\nwidth {WIDTH}\nmap\n" + "\n".join(rows) + "\n")

    rng = random.Random(args.seed)
    cells = [(x, y) for y in range(HEIGHT) for x in range(WIDTH)]
    for i in range(args.scenarios):
        starts = rng.sample(cells, args.agents)
        goals = rng.sample(cells, args.agents)
        lines = ["version 1"]
        for (sx, sy), (gx, gy) in zip(starts, goals):
            # On an open grid the shortest route is the Manhattan distance.
            dist = abs(sx - gx) + abs(sy - gy)
            lines.append(f"0\topen8x8.map\t{WIDTH}\t{HEIGHT}\t{sx}\t{sy}\t{gx}\t{gy}\t{dist}")
        (args.out / f"open8x8-{i:02d}.scen").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
