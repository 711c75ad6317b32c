"""Command line front end.

    aodvmc check SCENARIO [--property TEXT] [--variant NAME]...
                          [--max-states N] [--stats] [--trace PATH] [--quiet]
    aodvmc explore SCENARIO [--max-states N]

Exit codes: 0 the property holds, 1 it is refuted, 2 error or state limit.
SCENARIO is a file path or the name of a bundled scenario (paper1, paper2,
paper3).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .checker import DEFAULT_MAX_STATES, StateLimitExceeded, check_property, explore
from .core import VariantFlags
from .msc import export_trace, render_msc
from .properties import PropertyError, parse_property
from .scenario import ScenarioError, bundled_scenario_names, load_scenario

_VARIANT_NAMES = ("forward_all_rreps", "dest_forwards_rreq")


def _parse_variant(arg: str) -> tuple[str, bool]:
    name, _, val = arg.partition("=")
    if name not in _VARIANT_NAMES:
        raise ScenarioError(
            f"unknown variant {name!r} (expected one of {', '.join(_VARIANT_NAMES)})")
    if val == "":
        return name, True
    if val.lower() in ("true", "on", "1"):
        return name, True
    if val.lower() in ("false", "off", "0"):
        return name, False
    raise ScenarioError(f"bad variant value {arg!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="aodvmc",
        description="explicit-state checking of AODV route discovery on scripted scenarios",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    names = ", ".join(bundled_scenario_names())
    chk = sub.add_parser("check", help="check a temporal property of a scenario")
    chk.add_argument("scenario", help=f"scenario file or bundled name ({names})")
    chk.add_argument("--property", dest="property_text", metavar="TEXT",
                     help="override the property in the scenario file")
    chk.add_argument("--variant", action="append", default=[], metavar="NAME[=BOOL]",
                     help="enable a protocol variant (repeatable), overrides the file")
    chk.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES, metavar="N")
    chk.add_argument("--stats", action="store_true", help="print state counts and timing")
    chk.add_argument("--trace", metavar="PATH", help="write a structured trace export")
    chk.add_argument("--quiet", action="store_true", help="suppress the sequence chart")

    exp = sub.add_parser("explore", help="count the reachable state space")
    exp.add_argument("scenario", help=f"scenario file or bundled name ({names})")
    exp.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES, metavar="N")
    return ap


def cmd_check(args) -> int:
    scen = load_scenario(args.scenario)
    for arg in args.variant:
        name, value = _parse_variant(arg)
        scen = replace(scen, variants=replace(scen.variants, **{name: value}))
    text = args.property_text if args.property_text else scen.property_text
    prop = parse_property(text, scen.node_ids)
    print(f"scenario: {scen.name or args.scenario}")
    print(f"property: {prop.text}")
    try:
        verdict = check_property(scen, prop, max_states=args.max_states)
    except StateLimitExceeded as exc:
        print(f"error: {exc} ({exc.stats.reachable_states} states,"
              f" {exc.stats.transitions} transitions explored)")
        return 2
    print(f"verdict: {verdict.result}")
    if args.stats:
        s = verdict.stats
        print(f"states searched: {s.reachable_states}")
        print(f"transitions: {s.transitions}")
        print(f"elapsed: {s.elapsed:.3f} s")
    if verdict.trace is not None:
        kind = "witness" if verdict.holds else "counterexample"
        if not args.quiet:
            print(f"{kind}:")
            print(render_msc(verdict.trace, scen), end="")
        if args.trace:
            with open(args.trace, "w") as fh:
                fh.write(export_trace(verdict.trace, scen))
            print(f"{kind} written to {args.trace}")
    return 0 if verdict.holds else 1


def cmd_explore(args) -> int:
    scen = load_scenario(args.scenario)
    try:
        stats = explore(scen, max_states=args.max_states)
    except StateLimitExceeded as exc:
        print(f"error: {exc} ({exc.stats.reachable_states} states,"
              f" {exc.stats.transitions} transitions explored)")
        return 2
    print(f"scenario: {scen.name or args.scenario}")
    print(f"reachable states: {stats.reachable_states}")
    print(f"transitions: {stats.transitions}")
    print(f"elapsed: {stats.elapsed:.3f} s")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        return cmd_explore(args)
    except (ScenarioError, PropertyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
