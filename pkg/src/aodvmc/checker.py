"""Explicit-state search over scenario state spaces.

A[] and E<> are breadth-first reachability with parent pointers, so a
counterexample (or witness) path is shortest in search order.  A<> p is
checked as a search for EG !p evidence: depth-first over the states where p
fails, refuted by a deadlocked !p state or a !p cycle, which yields a lasso
counterexample.  Successor order is canonical, so all verdicts and traces
are deterministic.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

from .netmodel import ActionLabel, GlobalState, initial_state, successors
from .properties import Predicate, Property, Quantifier, eval_pred
from .scenario import Scenario

DEFAULT_MAX_STATES = 5_000_000


@dataclass
class SearchStats:
    reachable_states: int
    transitions: int
    elapsed: float


class StateLimitExceeded(Exception):
    def __init__(self, limit: int, stats: SearchStats):
        super().__init__(f"state limit of {limit} states exceeded")
        self.limit = limit
        self.stats = stats


@dataclass(frozen=True)
class Trace:
    """Steps from the (implicit) initial state; each step is (label, post state).

    For a lasso, lasso_start indexes the state sequence s0..sK (s0 initial,
    si the post state of step i-1): the final state equals s[lasso_start]
    and steps[lasso_start:] repeat forever.
    """

    steps: tuple[tuple[ActionLabel, GlobalState], ...]
    lasso_start: int | None = None

    def states(self, scen: Scenario) -> list[GlobalState]:
        return [initial_state(scen)] + [g for _, g in self.steps]


@dataclass
class Verdict:
    holds: bool
    trace: Trace | None
    stats: SearchStats

    @property
    def result(self) -> str:
        return "holds" if self.holds else "refuted"


def explore(
    scen: Scenario,
    max_states: int = DEFAULT_MAX_STATES,
    on_edge=None,
) -> SearchStats:
    """Count the reachable state space; on_edge(pre, label, post) sees every edge."""
    t0 = time.perf_counter()
    g0 = initial_state(scen)
    visited = {g0}
    queue = deque([g0])
    transitions = 0
    while queue:
        g = queue.popleft()
        for label, g2 in successors(g, scen):
            transitions += 1
            if on_edge is not None:
                on_edge(g, label, g2)
            if g2 not in visited:
                if len(visited) >= max_states:
                    stats = SearchStats(len(visited), transitions, time.perf_counter() - t0)
                    raise StateLimitExceeded(max_states, stats)
                visited.add(g2)
                queue.append(g2)
    return SearchStats(len(visited), transitions, time.perf_counter() - t0)


def _trace_back(parents, end: GlobalState) -> Trace:
    steps = []
    g = end
    while True:
        prev = parents[g]
        if prev is None:
            break
        parent, label = prev
        steps.append((label, g))
        g = parent
    steps.reverse()
    return Trace(steps=tuple(steps))


def _bfs(scen: Scenario, pred: Predicate, stop_when: bool, max_states: int):
    """Breadth-first search; stops at the first state where pred == stop_when.

    Returns (hit state or None, parents, stats).  States are tested once, at
    discovery, so every ancestor of the hit satisfies pred != stop_when.
    """
    t0 = time.perf_counter()
    g0 = initial_state(scen)
    parents: dict[GlobalState, tuple[GlobalState, ActionLabel] | None] = {g0: None}
    transitions = 0

    def stats():
        return SearchStats(len(parents), transitions, time.perf_counter() - t0)

    if eval_pred(pred, g0) == stop_when:
        return g0, parents, stats()
    queue = deque([g0])
    while queue:
        g = queue.popleft()
        for label, g2 in successors(g, scen):
            transitions += 1
            if g2 in parents:
                continue
            if len(parents) >= max_states:
                raise StateLimitExceeded(max_states, stats())
            parents[g2] = (g, label)
            if eval_pred(pred, g2) == stop_when:
                return g2, parents, stats()
            queue.append(g2)
    return None, parents, stats()


def check_ef(scen: Scenario, pred: Predicate, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """E<> pred: holds iff some reachable state satisfies pred (witness trace)."""
    hit, parents, stats = _bfs(scen, pred, stop_when=True, max_states=max_states)
    if hit is None:
        return Verdict(holds=False, trace=None, stats=stats)
    return Verdict(holds=True, trace=_trace_back(parents, hit), stats=stats)


def check_ag(scen: Scenario, pred: Predicate, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """A[] pred: holds iff pred holds in every reachable state."""
    hit, parents, stats = _bfs(scen, pred, stop_when=False, max_states=max_states)
    if hit is None:
        return Verdict(holds=True, trace=None, stats=stats)
    return Verdict(holds=False, trace=_trace_back(parents, hit), stats=stats)


def check_af(scen: Scenario, pred: Predicate, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """A<> pred: every maximal path eventually satisfies pred.

    Search the subgraph of !pred states reachable through !pred prefixes.
    A state with no successors at all refutes with a finite counterexample;
    a cycle inside the subgraph refutes with a lasso.  If the subgraph has
    neither, every maximal path runs into pred and the property holds.
    """
    t0 = time.perf_counter()
    g0 = initial_state(scen)
    seen = 1
    transitions = 0

    def stats():
        return SearchStats(seen, transitions, time.perf_counter() - t0)

    def guard():
        if seen > max_states:
            raise StateLimitExceeded(max_states, stats())

    if eval_pred(pred, g0):
        return Verdict(holds=True, trace=None, stats=stats())
    good: set[GlobalState] = set()       # pred holds, search boundary
    done: set[GlobalState] = set()       # fully explored, no evidence below
    on_stack: dict[GlobalState, int] = {g0: 0}   # state -> index in s0..sK
    path: list[tuple[ActionLabel, GlobalState]] = []
    root_succ = successors(g0, scen)
    if not root_succ:
        return Verdict(holds=False, trace=Trace(steps=()), stats=stats())
    stack = [(g0, root_succ, 0)]
    while stack:
        g, succ, i = stack[-1]
        if i >= len(succ):
            stack.pop()
            done.add(g)
            del on_stack[g]
            if path:
                path.pop()
            continue
        stack[-1] = (g, succ, i + 1)
        label, g2 = succ[i]
        transitions += 1
        if g2 in on_stack:
            trace = Trace(steps=tuple(path + [(label, g2)]), lasso_start=on_stack[g2])
            return Verdict(holds=False, trace=trace, stats=stats())
        if g2 in done or g2 in good:
            continue
        if eval_pred(pred, g2):
            good.add(g2)
            seen += 1
            guard()
            continue
        seen += 1
        guard()
        succ2 = successors(g2, scen)
        if not succ2:
            trace = Trace(steps=tuple(path + [(label, g2)]))
            return Verdict(holds=False, trace=trace, stats=stats())
        path.append((label, g2))
        on_stack[g2] = len(path)
        stack.append((g2, succ2, 0))
    return Verdict(holds=True, trace=None, stats=stats())


def check_property(scen: Scenario, prop: Property, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    if prop.quantifier is Quantifier.AF:
        return check_af(scen, prop.pred, max_states)
    if prop.quantifier is Quantifier.AG:
        return check_ag(scen, prop.pred, max_states)
    return check_ef(scen, prop.pred, max_states)
