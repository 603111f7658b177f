#!/usr/bin/env python3
"""Exhaustive soundness sweep over all posets on up to N nodes.

Usage: python scripts/sweep_small_posets.py [N]

Enumerates every poset up to isomorphism, decomposes each to a point,
replays the script, and verifies the certificate. N defaults to 6 (about
ten seconds); N=7 covers 2450 posets in about two minutes.
"""

from __future__ import annotations

import sys
import time

from posetglue import PosetMap, decompose_to_point, is_saturated_embedding, replay
from posetglue.generate import all_posets_upto_iso


def main() -> int:
    n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    grand_total = 0
    start = time.perf_counter()
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        reps = all_posets_upto_iso(n)
        t1 = time.perf_counter()
        for P in reps:
            script = decompose_to_point(P)
            final, _ = replay(script)
            tracked = PosetMap(P, final, script.embedding)
            assert is_saturated_embedding(tracked)
        t2 = time.perf_counter()
        grand_total += len(reps)
        print(
            f"n={n}: {len(reps):4d} posets  "
            f"(enumerate {t1 - t0:5.1f}s, decompose+replay {t2 - t1:5.1f}s)"
        )
    print(f"total: {grand_total} posets, all certificates verified "
          f"({time.perf_counter() - start:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
