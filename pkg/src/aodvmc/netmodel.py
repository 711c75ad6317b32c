"""Global network state and the interleaving transition relation.

One transition is either one node atomically handling the head of its
message buffer (including queuing everything it sent) or the tester firing
its next scripted event.  Broadcast reaches exactly the current neighbours,
unicast to a non-neighbour fails at the sender.  Messages are never lost,
duplicated or reordered; buffers survive topology changes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

from .core import (
    BroadcastSend,
    Deliver,
    FailurePolicy,
    Message,
    NodeState,
    Rerr,
    UnicastSend,
    msg_kind,
    rt_put,
    step_node,
)
from .scenario import Connect, Disconnect, InjectPkt, Scenario
from .core import Newpkt


@dataclass(frozen=True)
class Topology:
    n: int
    links: frozenset[tuple[int, int]]  # pairs with a < b

    @staticmethod
    def of(n: int, pairs) -> "Topology":
        return Topology(n, frozenset((min(a, b), max(a, b)) for a, b in pairs))

    def connected(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.links

    def neighbors(self, x: int) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i != x and self.connected(x, i))

    def with_link(self, a: int, b: int) -> "Topology":
        return Topology(self.n, self.links | {(min(a, b), max(a, b))})

    def without_link(self, a: int, b: int) -> "Topology":
        return Topology(self.n, self.links - {(min(a, b), max(a, b))})


@dataclass(frozen=True)
class GlobalState:
    nodes: tuple[NodeState, ...]
    topo: Topology
    tester_pc: int
    delivered: frozenset[tuple[int, int, int]]  # (receiver, origin, data)

    def node(self, ip: int) -> NodeState:
        return self.nodes[ip - 1]

    def with_node(self, ns: NodeState) -> "GlobalState":
        nodes = self.nodes[: ns.ip - 1] + (ns,) + self.nodes[ns.ip :]
        return replace(self, nodes=nodes)


# Action labels, one per transition.  A protocol step wraps the labels of
# whatever it sent so a trace row can show the whole atomic move.


@dataclass(frozen=True)
class Inject:
    at: int
    dest: int


@dataclass(frozen=True)
class Broadcast:
    sender: int
    msg: Message
    receivers: frozenset[int]


@dataclass(frozen=True)
class Unicast:
    sender: int
    receiver: int
    msg: Message


@dataclass(frozen=True)
class UnicastFail:
    sender: int
    receiver: int
    msg: Message


@dataclass(frozen=True)
class Delivered:
    node: int
    origin: int
    data: int


@dataclass(frozen=True)
class LinkUp:
    a: int
    b: int


@dataclass(frozen=True)
class LinkDown:
    a: int
    b: int


@dataclass(frozen=True)
class NodeStep:
    node: int
    kind: str  # newpkt | pkt | rreq | rrep | rerr
    sends: tuple["ActionLabel", ...] = ()


ActionLabel = Inject | Broadcast | Unicast | UnicastFail | Delivered | LinkUp | LinkDown | NodeStep


def apply_sends(g: GlobalState, sender: int, actions) -> tuple[GlobalState, list[ActionLabel]]:
    """Queue each send action into receiver buffers, labelling what happened.

    A failed data unicast with the generate-rerr policy invalidates the
    route the sender just used (dsn bumped by one) and broadcasts the loss,
    which is applied through this same function.
    """
    labels: list[ActionLabel] = []
    for act in actions:
        if isinstance(act, BroadcastSend):
            receivers = g.topo.neighbors(sender)
            for r in receivers:
                g = g.with_node(g.node(r).enqueue(act.msg))
            labels.append(Broadcast(sender, act.msg, frozenset(receivers)))
        elif isinstance(act, UnicastSend):
            if g.topo.connected(sender, act.dst):
                g = g.with_node(g.node(act.dst).enqueue(act.msg))
                labels.append(Unicast(sender, act.dst, act.msg))
            else:
                labels.append(UnicastFail(sender, act.dst, act.msg))
                if act.on_fail is FailurePolicy.GENERATE_RERR:
                    ns = g.node(sender)
                    e = ns.route(act.msg.dip)
                    lost_dsn = (e.dsn if e is not None else 0) + 1
                    if e is not None:
                        ns = replace(
                            ns,
                            rt=rt_put(ns.rt, replace(e, valid=False, dsn=lost_dsn, dsn_known=True)),
                        )
                        g = g.with_node(ns)
                    rerr = Rerr(dests=((act.msg.dip, lost_dsn),), sip=sender)
                    g, more = apply_sends(g, sender, [BroadcastSend(rerr)])
                    labels.extend(more)
        elif isinstance(act, Deliver):
            g = replace(g, delivered=g.delivered | {(sender, act.origin, act.data)})
            labels.append(Delivered(sender, act.origin, act.data))
        else:
            raise TypeError(f"unhandled send action {act!r}")
    return g, labels


def successors(g: GlobalState, scen: Scenario) -> list[tuple[ActionLabel, GlobalState]]:
    """All enabled transitions, in canonical order: nodes by id, tester last."""
    out: list[tuple[ActionLabel, GlobalState]] = []
    for ns in g.nodes:
        if not ns.msg_buf:
            continue
        kind = msg_kind(ns.msg_buf[0])
        ns2, acts = step_node(ns, scen.variants)
        g2, labels = apply_sends(g.with_node(ns2), ns.ip, acts)
        out.append((NodeStep(ns.ip, kind, tuple(labels)), g2))
    if g.tester_pc < len(scen.events):
        ev = scen.events[g.tester_pc]
        g2 = replace(g, tester_pc=g.tester_pc + 1)
        match ev:
            case InjectPkt(at=at, dest=dest, data=data):
                g2 = g2.with_node(g2.node(at).enqueue(Newpkt(data=data, dip=dest)))
                out.append((Inject(at, dest), g2))
            case Connect(a=a, b=b):
                out.append((LinkUp(a, b), replace(g2, topo=g2.topo.with_link(a, b))))
            case Disconnect(a=a, b=b):
                out.append((LinkDown(a, b), replace(g2, topo=g2.topo.without_link(a, b))))
    return out


def initial_state(scen: Scenario) -> GlobalState:
    nodes = tuple(NodeState(ip=i) for i in range(1, scen.n + 1))
    return GlobalState(
        nodes=nodes,
        topo=Topology.of(scen.n, scen.links),
        tester_pc=0,
        delivered=frozenset(),
    )


def state_lines(g: GlobalState, scen: Scenario) -> list[str]:
    """Canonical per-node description of g, used for snapshots and hashing."""
    out = []
    for ns in g.nodes:
        entries = []
        for e in ns.rt:
            flags = f"dsn={e.dsn}{'' if e.dsn_known else '?'},{'valid' if e.valid else 'invalid'}"
            pre = ",".join(scen.name_of(p) for p in sorted(e.precursors))
            entries.append(
                f"{scen.name_of(e.dip)}=({flags},hops={e.hops},"
                f"nhop={scen.name_of(e.nhop) if e.nhop else '-'},pre={{{pre}}})"
            )
        stored = " ".join(
            f"store[{scen.name_of(d)}]={','.join(str(x) for x in payloads)}"
            for d, payloads in ns.store
        )
        buf = ",".join(msg_kind(m) for m in ns.msg_buf)
        line = f"node {scen.name_of(ns.ip)}: sn={ns.sn}"
        if stored:
            line += f" {stored}"
        if buf:
            line += f" buf=[{buf}]"
        line += " rt: " + (" ".join(entries) if entries else "-")
        out.append(line)
    got = " ".join(
        f"({scen.name_of(r)}<-{scen.name_of(o)} data={d})"
        for r, o, d in sorted(g.delivered)
    )
    out.append(f"delivered: {got if got else '-'}")
    return out


def state_fingerprint(g: GlobalState, scen: Scenario) -> str:
    """Stable short hash of the full state, including buffer contents."""
    h = hashlib.sha256()
    h.update("\n".join(state_lines(g, scen)).encode())
    h.update(f"\npc={g.tester_pc} links={sorted(g.topo.links)}".encode())
    for ns in g.nodes:
        h.update(repr(ns.msg_buf).encode())
        h.update(repr(sorted(ns.rreq_seen)).encode())
        h.update(f"next_rreq_id={ns.next_rreq_id}".encode())
    return h.hexdigest()[:16]
