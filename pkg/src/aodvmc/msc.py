"""Message sequence charts and structured trace export.

Both entry points first replay the trace against the scenario through the
successor relation; a trace that does not replay is rejected rather than
rendered.  The export format is line oriented and self contained: it embeds
the scenario, one action line per step, per-step per-node table snapshots,
and a fingerprint of the final state, so a saved trace can be re-imported
and replayed later.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checker import Trace
from .core import Message, Newpkt, Pkt, Rerr, Rrep, Rreq
from .netmodel import (
    ActionLabel,
    Broadcast,
    Delivered,
    GlobalState,
    Inject,
    LinkDown,
    LinkUp,
    NodeStep,
    Unicast,
    UnicastFail,
    initial_state,
    state_fingerprint,
    state_lines,
    successors,
)
from .scenario import Scenario, parse_scenario, serialize_scenario


class ReplayMismatch(Exception):
    """A trace step does not match any enabled transition (or its post state)."""


def fmt_msg(m: Message, scen: Scenario) -> str:
    nm = scen.name_of
    match m:
        case Rreq():
            dsn = f"{m.dsn}" if m.dsn_known else f"{m.dsn}?"
            return (f"rreq id={m.rreq_id} dip={nm(m.dip)} dsn={dsn}"
                    f" oip={nm(m.oip)} osn={m.osn} hops={m.hops}")
        case Rrep():
            return f"rrep dip={nm(m.dip)} dsn={m.dsn} oip={nm(m.oip)} hops={m.hops}"
        case Rerr():
            dests = ",".join(f"{nm(d)}:{sn}" for d, sn in m.dests)
            return f"rerr {{{dests}}}"
        case Pkt():
            return f"pkt data={m.data} dip={nm(m.dip)} oip={nm(m.oip)}"
        case Newpkt():
            return f"newpkt data={m.data} dip={nm(m.dip)}"
    raise TypeError(f"unhandled message {m!r}")


def channel_of(m: Message, sender: int, scen: Scenario) -> str:
    """Short channel tag drawn on chart arrows."""
    match m:
        case Rreq():
            return f"rreq[{scen.name_of(sender)}]"
        case Rerr():
            return f"rerr[{scen.name_of(sender)}]"
        case Rrep():
            return "rrep"
        case Pkt():
            return "pkt"
        case Newpkt():
            return "newpkt"
    raise TypeError(f"unhandled message {m!r}")


def format_action(label: ActionLabel, scen: Scenario) -> str:
    """Canonical one-line action description; used for export and replay."""
    nm = scen.name_of
    match label:
        case Inject(at=at, dest=dest):
            return f"inject newpkt at={nm(at)} dest={nm(dest)}"
        case Broadcast(sender=s, msg=m, receivers=rs):
            who = ",".join(nm(r) for r in sorted(rs)) if rs else "nobody"
            return f"bcast[{nm(s)}] {fmt_msg(m, scen)} -> {{{who}}}"
        case Unicast(sender=s, receiver=r, msg=m):
            return f"ucast {nm(s)}->{nm(r)} {fmt_msg(m, scen)}"
        case UnicastFail(sender=s, receiver=r, msg=m):
            return f"ucast-lost {nm(s)}->{nm(r)} {fmt_msg(m, scen)}"
        case Delivered(node=n, origin=o, data=d):
            return f"deliver at={nm(n)} from={nm(o)} data={d}"
        case LinkUp(a=a, b=b):
            return f"connect {nm(a)} {nm(b)}"
        case LinkDown(a=a, b=b):
            return f"disconnect {nm(a)} {nm(b)}"
        case NodeStep(node=n, kind=k, sends=sends):
            inner = "; ".join(format_action(s, scen) for s in sends) if sends else "no sends"
            return f"step {nm(n)} {k} [{inner}]"
    raise TypeError(f"unhandled action label {label!r}")


def replay_trace(trace: Trace, scen: Scenario) -> GlobalState:
    """Run the trace through the successor relation, verifying every step."""
    g = initial_state(scen)
    states = [g]
    for i, (label, post) in enumerate(trace.steps):
        match_ = [g2 for lab, g2 in successors(g, scen) if lab == label]
        if len(match_) != 1:
            raise ReplayMismatch(f"step {i}: action not enabled: {format_action(label, scen)}")
        if match_[0] != post:
            raise ReplayMismatch(f"step {i}: post state differs from recorded state")
        g = match_[0]
        states.append(g)
    if trace.lasso_start is not None:
        if not 0 <= trace.lasso_start < len(trace.steps):
            raise ReplayMismatch(f"lasso start {trace.lasso_start} out of range")
        if states[trace.lasso_start] != g:
            raise ReplayMismatch("lasso does not close: final state differs from re-entry state")
    return g


# Chart layout: one column per participant (tester first, then nodes by id),
# one row per step, arrows drawn between column centres.

_MIN_COL = 11


def _draw_arrow(canvas: list[str], frm: int, to: int, head: str):
    lo, hi = min(frm, to), max(frm, to)
    for x in range(lo + 1, hi):
        canvas[x] = "-"
    canvas[to] = head


def _overlay(canvas: list[str], frm: int, to: int, text: str):
    lo, hi = min(frm, to), max(frm, to)
    if hi - lo <= 2:
        start = hi + 1
    else:
        start = max(lo + 1, (lo + hi - len(text)) // 2)
    for j, ch in enumerate(text):
        x = start + j
        if 0 <= x < len(canvas):
            canvas[x] = ch


def render_msc(trace: Trace, scen: Scenario) -> str:
    """Plain-text chart of the trace; raises ReplayMismatch if it does not replay."""
    replay_trace(trace, scen)
    return _render_rows(trace, scen)


def _render_rows(trace: Trace, scen: Scenario) -> str:
    names = ["tester"] + list(scen.node_names)
    width = max(_MIN_COL, max(len(s) for s in names) + 4)
    centers = [i * width + width // 2 for i in range(len(names))]
    total = width * len(names)
    col = {0: centers[0]}
    for i in range(1, scen.n + 1):
        col[i] = centers[i]

    lines = ["step  " + "".join(s.center(width) for s in names)]

    def new_canvas() -> list[str]:
        canvas = [" "] * total
        for c in centers:
            canvas[c] = "|"
        return canvas

    def draw_send(canvas: list[str], sub: ActionLabel):
        match sub:
            case Broadcast(sender=s, msg=m, receivers=rs):
                tag = channel_of(m, s, scen)
                if rs:
                    for r in sorted(rs):
                        _draw_arrow(canvas, col[s], col[r], "*")
                    nearest = min(rs, key=lambda r: abs(col[r] - col[s]))
                    _overlay(canvas, col[s], col[nearest], tag)
                else:
                    _overlay(canvas, col[s], col[s] + 2, tag)
                canvas[col[s]] = "o"
            case Unicast(sender=s, receiver=r, msg=m):
                head = ">" if col[r] > col[s] else "<"
                _draw_arrow(canvas, col[s], col[r], head)
                _overlay(canvas, col[s], col[r], channel_of(m, s, scen))
                canvas[col[s]] = "o"
            case UnicastFail(sender=s, receiver=r, msg=m):
                _draw_arrow(canvas, col[s], col[r], "x")
                _overlay(canvas, col[s], col[r], channel_of(m, s, scen))
                canvas[col[s]] = "o"
            case Delivered(node=n):
                canvas[col[n]] = "o"

    for i, (label, _post) in enumerate(trace.steps):
        canvas = new_canvas()
        match label:
            case Inject(at=at):
                _draw_arrow(canvas, col[0], col[at], ">")
                _overlay(canvas, col[0], col[at], "newpkt")
                canvas[col[0]] = "o"
            case LinkUp(a=a, b=b) | LinkDown(a=a, b=b):
                canvas[col[0]] = "o"
                mark = "+" if isinstance(label, LinkUp) else "x"
                canvas[col[a]] = mark
                canvas[col[b]] = mark
            case NodeStep(node=n, sends=sends):
                canvas[col[n]] = "o"
                for sub in sends:
                    draw_send(canvas, sub)
                canvas[col[n]] = "o"
            case _:
                draw_send(canvas, label)
        note = format_action(label, scen)
        if trace.lasso_start == i:
            note += "   <- cycle start"
        lines.append(f"{i:>4}  " + "".join(canvas).rstrip() + "   " + note)
    if trace.lasso_start is not None:
        lines.append(f"      (loops back to step {trace.lasso_start}, repeating forever)")
    return "\n".join(lines) + "\n"


def export_trace(trace: Trace, scen: Scenario) -> str:
    """Structured, replayable trace document (see module docstring)."""
    final = replay_trace(trace, scen)
    out = ["trace-export: 1", f"scenario-name: {scen.name or '-'}"]
    out.append(f"steps: {len(trace.steps)}")
    out.append(f"lasso: {trace.lasso_start if trace.lasso_start is not None else 'none'}")
    out.append(f"final-state: {state_fingerprint(final, scen)}")
    out.append("scenario:")
    out.extend("|" + line for line in serialize_scenario(scen).splitlines())
    for i, (label, post) in enumerate(trace.steps):
        out.append(f"step: {i}")
        out.append(f"action: {format_action(label, scen)}")
        out.extend(state_lines(post, scen))
    return "\n".join(out) + "\n"


@dataclass
class LoadedExport:
    scenario: Scenario
    actions: list[str]
    lasso: int | None
    final_hash: str


def load_export(text: str) -> LoadedExport:
    scen_lines: list[str] = []
    actions: list[str] = []
    lasso: int | None = None
    final_hash = ""
    for line in text.splitlines():
        if line.startswith("|"):
            scen_lines.append(line[1:])
        elif line.startswith("action: "):
            actions.append(line[len("action: "):])
        elif line.startswith("lasso: "):
            val = line[len("lasso: "):].strip()
            lasso = None if val == "none" else int(val)
        elif line.startswith("final-state: "):
            final_hash = line[len("final-state: "):].strip()
    if not scen_lines:
        raise ReplayMismatch("export document has no embedded scenario")
    scen = parse_scenario("\n".join(scen_lines))
    return LoadedExport(scen, actions, lasso, final_hash)


def replay_export(text: str) -> GlobalState:
    """Re-import an exported trace, replay it, and verify the final fingerprint."""
    loaded = load_export(text)
    scen = loaded.scenario
    g = initial_state(scen)
    for i, wanted in enumerate(loaded.actions):
        match_ = [g2 for lab, g2 in successors(g, scen)
                  if format_action(lab, scen) == wanted]
        if len(match_) != 1:
            raise ReplayMismatch(f"step {i}: no unique transition for: {wanted}")
        g = match_[0]
    if state_fingerprint(g, scen) != loaded.final_hash:
        raise ReplayMismatch("replayed final state does not match recorded fingerprint")
    return g
