#!/usr/bin/env python3
"""Measure bulk generation speed of each parameter set.

Runs the compiled ring-buffer kernel in checksum mode (no output storage),
after a short warm-up so compilation is excluded from the timing.
"""

import argparse
import sys
import time

from melg64 import bulk
from melg64.core import init_seed
from melg64.params import PARAMS

def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=lambda s: int(float(s)), default=10 ** 8,
                    help="outputs per set (default 1e8)")
    ap.add_argument("--seed", type=int, default=5489)
    ap.add_argument("--sets", nargs="*",
                    default=sorted(PARAMS, key=lambda n: PARAMS[n].p))
    args = ap.parse_args(argv)

    for name in args.sets:
        params = PARAMS[name]
        bulk.checksum_stream(init_seed(args.seed, params), params, 10 ** 4)
        t0 = time.perf_counter()
        checksum = bulk.checksum_stream(init_seed(args.seed, params), params,
                                        args.count)
        dt = time.perf_counter() - t0
        rate = args.count / dt / 1e6
        print(f"{name:<14s} count={args.count} seconds={dt:7.3f} "
              f"rate={rate:7.1f}M/s checksum={checksum:#018x}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
