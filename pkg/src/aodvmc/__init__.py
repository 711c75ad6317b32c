"""Explicit-state model checking of AODV route discovery.

The model follows the process-algebra reading of the protocol: per-node
routing tables and sequence numbers, guaranteed broadcast to current
neighbours, conditional unicast, and a scripted tester that injects data
packets and toggles links.  The checker exhaustively interleaves node steps
and tester events and decides A<>, A[] and E<> properties over routing
tables and the delivery log, producing replayable message-sequence-chart
counterexamples.
"""

from .checker import (
    DEFAULT_MAX_STATES,
    SearchStats,
    StateLimitExceeded,
    Trace,
    Verdict,
    check_af,
    check_ag,
    check_ef,
    check_property,
    explore,
)
from .core import VariantFlags
from .msc import ReplayMismatch, export_trace, format_action, render_msc, replay_export, replay_trace
from .netmodel import GlobalState, Topology, initial_state, successors
from .properties import Property, PropertyError, Quantifier, eval_pred, parse_property
from .scenario import (
    Scenario,
    ScenarioError,
    bundled_scenario_names,
    bundled_scenario_path,
    load_scenario,
    parse_scenario,
    serialize_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MAX_STATES",
    "GlobalState",
    "Property",
    "PropertyError",
    "Quantifier",
    "ReplayMismatch",
    "Scenario",
    "ScenarioError",
    "SearchStats",
    "StateLimitExceeded",
    "Topology",
    "Trace",
    "VariantFlags",
    "Verdict",
    "bundled_scenario_names",
    "bundled_scenario_path",
    "check_af",
    "check_ag",
    "check_ef",
    "check_property",
    "eval_pred",
    "explore",
    "export_trace",
    "format_action",
    "initial_state",
    "load_scenario",
    "parse_property",
    "parse_scenario",
    "render_msc",
    "replay_export",
    "replay_trace",
    "serialize_scenario",
    "successors",
]
