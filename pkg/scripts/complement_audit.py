"""Random audit of the complement law.

Generates seeded random global types, complements each with the first
applicable procedure, and checks the bounded xor law against the oracle.
"""

from __future__ import annotations

import argparse
import random

from chorcheck.complement import (NoComplementMethodError, complement_auto,
                                  verify_complement)
from chorcheck.randomgen import (random_commutation_deterministic,
                                 random_three_process_deterministic)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--max-events", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    failures = skipped = 0
    for i in range(args.count):
        gen = (random_commutation_deterministic if i % 2 == 0
               else random_three_process_deterministic)
        g = gen(rng)
        try:
            result = complement_auto(g)
        except NoComplementMethodError:
            skipped += 1
            continue
        report = verify_complement(g, result.gtype, args.max_events)
        status = "ok" if report.passed else "FAIL"
        if not report.passed:
            failures += 1
        print(f"[{i:3}] {result.method:12} universe={report.universe_size:6} {status}")
    print(f"\n{args.count - failures - skipped} passed, {failures} failed, "
          f"{skipped} skipped (no applicable method)")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
