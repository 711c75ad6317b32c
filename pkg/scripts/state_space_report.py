#!/usr/bin/env python3
"""Tabulate reachable-state counts for scenario files.

With no arguments, reports the bundled scenarios.  Pass scenario paths or
bundled names to measure others; --variant applies to every run.
"""

import argparse
import sys
from dataclasses import replace

from aodvmc import VariantFlags, bundled_scenario_names, explore, load_scenario


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scenarios", nargs="*", default=bundled_scenario_names())
    ap.add_argument("--variant", action="append", default=[],
                    choices=("forward_all_rreps", "dest_forwards_rreq"))
    ap.add_argument("--max-states", type=int, default=None)
    args = ap.parse_args()

    print(f"{'scenario':<12} {'nodes':>5} {'events':>6} {'states':>8} "
          f"{'transitions':>11} {'time':>8}")
    for name in args.scenarios:
        scen = load_scenario(name)
        for v in args.variant:
            scen = replace(scen, variants=replace(scen.variants, **{v: True}))
        kw = {"max_states": args.max_states} if args.max_states else {}
        stats = explore(scen, **kw)
        print(f"{scen.name or name:<12} {scen.n:>5} {len(scen.events):>6} "
              f"{stats.reachable_states:>8} {stats.transitions:>11} "
              f"{stats.elapsed:>7.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
