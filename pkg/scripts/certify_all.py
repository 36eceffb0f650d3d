#!/usr/bin/env python3
"""Certify the maximal period of every registered parameter set.

Recovers each characteristic polynomial from the output stream, checks
irreducibility, and prints the weight N1 alongside the expected value.
Optionally dumps the polynomials as hex for later reuse.

Large sets take a while (MELG44497-64 on the order of minutes); pass
--sets to restrict the run.
"""

import argparse
import sys
from pathlib import Path

from melg64.f2poly import CertificationError, assert_maximal_period, poly_to_hex
from melg64.jump import wrap_hex
from melg64.params import PARAMS

EXPECTED_N1 = {"MELG607-64": 313, "MELG1279-64": 641, "MELG2281-64": 1145,
               "MELG4253-64": 2129, "MELG11213-64": 5455,
               "MELG19937-64": 9603, "MELG44497-64": 19475}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sets", nargs="*", default=sorted(PARAMS, key=lambda n: PARAMS[n].p),
                    help="parameter set names (default: all, smallest first)")
    ap.add_argument("--dump-dir", default=None, metavar="DIR",
                    help="write <name>.charpoly hex dumps here")
    args = ap.parse_args(argv)

    failures = 0
    for name in args.sets:
        params = PARAMS[name]
        try:
            cert = assert_maximal_period(params)
        except CertificationError as exc:
            print(f"{name}: FAILED at stage {exc.stage}: {exc}")
            failures += 1
            continue
        mark = "ok" if cert.n1 == EXPECTED_N1.get(name) else "UNEXPECTED"
        print(f"{cert.summary()}  [{mark}]")
        if args.dump_dir:
            out = Path(args.dump_dir) / f"{name}.charpoly"
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(wrap_hex(poly_to_hex(cert.charpoly)))
            print(f"  wrote {out}")
        if cert.n1 != EXPECTED_N1.get(name):
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
