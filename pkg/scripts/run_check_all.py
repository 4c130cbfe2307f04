#!/usr/bin/env python3
"""Run the full verification pipeline for a few standard configurations.

Exits nonzero if any configuration fails, mirroring CI usage of
``nodal-kit check-all``.
"""

import sys

from nodal_kit import cli

CONFIGS = [
    ["--ring", "q", "--gamma", "3", "--delta", "2"],
    ["--ring", "q", "--gamma", "0", "--delta", "-1"],
    ["--ring", "fp:5", "--gamma", "1", "--delta", "0"],
    ["--ring", "fp:7", "--gamma", "3", "--delta", "2", "--s", "1", "--t", "4"],
]


def main():
    worst = 0
    for extra in CONFIGS:
        print(f"$ nodal-kit check-all {' '.join(extra)}")
        code = cli.main(["check-all", *extra])
        worst = max(worst, code)
        print()
    return worst


if __name__ == "__main__":
    sys.exit(main())
