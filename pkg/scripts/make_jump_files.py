#!/usr/bin/env python3
"""Precompute jump polynomial files for the substream stride (or any distance).

The files land in the cache directory the CLI consults (override with
MELG64_CACHE_DIR), so later `melg64 gen --stream I` calls skip the derivation.
"""

import argparse
import sys

from melg64.jump import (SUBSTREAM_STRIDE, default_cache_dir, format_distance,
                         get_jump_poly, parse_distance)
from melg64.params import PARAMS

def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--distance", type=parse_distance,
                    default=SUBSTREAM_STRIDE,
                    help="jump distance, decimal or 2^k (default 2^256)")
    ap.add_argument("--out-dir", default=None,
                    help=f"target directory (default {default_cache_dir()})")
    ap.add_argument("--sets", nargs="*",
                    default=sorted(PARAMS, key=lambda n: PARAMS[n].p))
    args = ap.parse_args(argv)

    cache = args.out_dir or default_cache_dir()
    for name in args.sets:
        params = PARAMS[name]
        jp = get_jump_poly(params, args.distance, cache_dir=cache)
        print(f"{name}: J={format_distance(jp.distance)} "
              f"deg(g)={jp.g.bit_length() - 1} -> {cache}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
