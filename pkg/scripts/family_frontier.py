#!/usr/bin/env python3
"""Track the two annotation families toward their limiting exponents.

The fvm family climbs toward the golden ratio; the w family climbs toward
2cos(pi/7) ~ 1.8019377. Prints one line per family member with the gap to
the limit, so the approach rate is visible at a glance.
"""

import argparse
import math
import sys
import time

from atlb.annotation import family_fvm, family_w
from atlb.search import best_c

PHI = (1 + math.sqrt(5)) / 2
COS_LIMIT = 2 * math.cos(math.pi / 7)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fvm-max", type=int, default=8, help="largest fvm index")
    ap.add_argument("--w-max", type=int, default=3, help="largest diagonal w pair")
    ap.add_argument("--precision", type=float, default=1e-6)
    args = ap.parse_args()

    print("family  param  length  best_c     gap to limit")
    for k in range(1, args.fvm_max + 1):
        ann = family_fvm(k)
        t0 = time.monotonic()
        r = best_c(ann, args.precision)
        print(
            f"fvm     {k:<5}  {len(ann.bits):>6}  {r.best_c:.7f}  "
            f"{PHI - r.best_c:+.2e}   ({time.monotonic() - t0:.1f}s)"
        )
    for k in range(1, args.w_max + 1):
        ann = family_w(k, k)
        t0 = time.monotonic()
        r = best_c(ann, args.precision)
        print(
            f"w       {k},{k:<3}  {len(ann.bits):>6}  {r.best_c:.7f}  "
            f"{COS_LIMIT - r.best_c:+.2e}   ({time.monotonic() - t0:.1f}s)"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
