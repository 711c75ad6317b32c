"""AODV node state and message handlers.

Everything here is a pure function from an immutable node state (plus one
message) to a new node state and a list of send actions.  Delivery of those
actions to other nodes is the network model's job; a node never reaches into
another node's state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

# A node id is an int >= 1.  0 is the published "no next hop" value that
# predicates read for a missing routing table entry.
NO_NEXT_HOP = 0


@dataclass(frozen=True)
class RouteEntry:
    """One routing table row: how to reach dip and how fresh that knowledge is."""

    dip: int
    dsn: int
    dsn_known: bool
    valid: bool
    hops: int
    nhop: int
    precursors: frozenset[int] = frozenset()


# Messages.  sip is always the one-hop sender, set by the emitting handler.


@dataclass(frozen=True)
class Rreq:
    hops: int
    rreq_id: int
    dip: int
    dsn: int
    dsn_known: bool
    oip: int
    osn: int
    sip: int


@dataclass(frozen=True)
class Rrep:
    hops: int
    dip: int
    dsn: int
    oip: int
    sip: int


@dataclass(frozen=True)
class Rerr:
    dests: tuple[tuple[int, int], ...]  # sorted (dip, dsn) pairs
    sip: int


@dataclass(frozen=True)
class Pkt:
    data: int
    dip: int
    oip: int
    sip: int


@dataclass(frozen=True)
class Newpkt:
    data: int
    dip: int


Message = Rreq | Rrep | Rerr | Pkt | Newpkt


def msg_kind(m: Message) -> str:
    return type(m).__name__.lower()


class FailurePolicy(Enum):
    GENERATE_RERR = "generate-rerr"
    DISCARD = "discard"


@dataclass(frozen=True)
class BroadcastSend:
    msg: Message


@dataclass(frozen=True)
class UnicastSend:
    dst: int
    msg: Message
    on_fail: FailurePolicy


@dataclass(frozen=True)
class Deliver:
    data: int
    origin: int


SendAction = BroadcastSend | UnicastSend | Deliver


@dataclass(frozen=True)
class VariantFlags:
    """Protocol tweaks that repair the two route reply defects."""

    forward_all_rreps: bool = False
    dest_forwards_rreq: bool = False


# Routing tables are tuples of entries sorted by dip so that node states
# hash and compare by value.  Tables are tiny (bounded by the node count),
# linear scans are fine.

RoutingTable = tuple[RouteEntry, ...]


def rt_lookup(rt: RoutingTable, dip: int) -> RouteEntry | None:
    for e in rt:
        if e.dip == dip:
            return e
    return None


def rt_put(rt: RoutingTable, entry: RouteEntry) -> RoutingTable:
    kept = tuple(e for e in rt if e.dip != entry.dip)
    return tuple(sorted(kept + (entry,), key=lambda e: e.dip))


def update_route(rt: RoutingTable, cand: RouteEntry) -> tuple[RoutingTable, bool]:
    """Fold a candidate route into the table.

    The candidate wins if the destination is new, if it carries a strictly
    newer sequence number, if it ties the sequence number with fewer hops or
    against an invalidated entry, or if its own sequence number is unknown
    and the existing entry is invalid.  A winning candidate inherits the old
    entry's precursors, and its dsn never drops below the old one.
    """
    old = rt_lookup(rt, cand.dip)
    if old is None:
        return rt_put(rt, cand), True
    take = False
    if cand.dsn_known and old.dsn_known:
        if cand.dsn > old.dsn:
            take = True
        elif cand.dsn == old.dsn and (cand.hops < old.hops or not old.valid):
            take = True
    if not cand.dsn_known and not old.valid:
        take = True
    if not take:
        return rt, False
    merged = replace(
        cand,
        dsn=max(cand.dsn, old.dsn),
        dsn_known=cand.dsn_known or old.dsn_known,
        precursors=cand.precursors | old.precursors,
    )
    if merged == old:
        return rt, False
    return rt_put(rt, merged), True


def invalidate_routes(rt: RoutingTable, dests: dict[int, int]) -> RoutingTable:
    """Mark the listed destinations invalid, lifting each dsn to the reported one."""
    out = []
    for e in rt:
        sn = dests.get(e.dip)
        if sn is not None and e.valid:
            if sn > e.dsn:
                e = replace(e, valid=False, dsn=sn, dsn_known=True)
            else:
                e = replace(e, valid=False)
        out.append(e)
    return tuple(out)


# Queued payloads awaiting route discovery: sorted (dip, payloads) pairs,
# pairs with no payloads are dropped so states stay canonical.

Store = tuple[tuple[int, tuple[int, ...]], ...]


def store_lookup(store: Store, dip: int) -> tuple[int, ...]:
    for d, payloads in store:
        if d == dip:
            return payloads
    return ()


def store_append(store: Store, dip: int, data: int) -> Store:
    kept = tuple(p for p in store if p[0] != dip)
    pair = (dip, store_lookup(store, dip) + (data,))
    return tuple(sorted(kept + (pair,)))


def store_clear(store: Store, dip: int) -> Store:
    return tuple(p for p in store if p[0] != dip)


@dataclass(frozen=True)
class NodeState:
    ip: int
    sn: int = 1
    rt: RoutingTable = ()
    rreq_seen: frozenset[tuple[int, int]] = frozenset()
    next_rreq_id: int = 1
    msg_buf: tuple[Message, ...] = ()
    store: Store = ()

    def route(self, dip: int) -> RouteEntry | None:
        return rt_lookup(self.rt, dip)

    def valid_route(self, dip: int) -> RouteEntry | None:
        e = rt_lookup(self.rt, dip)
        return e if e is not None and e.valid else None

    def enqueue(self, m: Message) -> "NodeState":
        return replace(self, msg_buf=self.msg_buf + (m,))


def handle_newpkt(n: NodeState, data: int, dip: int) -> tuple[NodeState, list[SendAction]]:
    """Accept a locally injected payload for dip.

    With a valid route the payload goes straight out as a data packet.
    Otherwise it is queued; the first queued payload for a destination also
    starts route discovery (bump own sn, fresh rreq id, broadcast).
    """
    e = n.valid_route(dip)
    if e is not None:
        pkt = Pkt(data=data, dip=dip, oip=n.ip, sip=n.ip)
        return n, [UnicastSend(e.nhop, pkt, FailurePolicy.GENERATE_RERR)]
    pending = store_lookup(n.store, dip)
    n = replace(n, store=store_append(n.store, dip, data))
    if pending:
        # discovery already in flight for dip, do not flood again
        return n, []
    known = n.route(dip)
    rreq = Rreq(
        hops=0,
        rreq_id=n.next_rreq_id,
        dip=dip,
        dsn=known.dsn if known is not None else 0,
        dsn_known=known.dsn_known if known is not None else False,
        oip=n.ip,
        osn=n.sn + 1,
        sip=n.ip,
    )
    n = replace(
        n,
        sn=n.sn + 1,
        next_rreq_id=n.next_rreq_id + 1,
        rreq_seen=n.rreq_seen | {(n.ip, rreq.rreq_id)},
    )
    return n, [BroadcastSend(rreq)]


def handle_pkt(n: NodeState, m: Pkt) -> tuple[NodeState, list[SendAction]]:
    """Deliver or forward a data packet, or report the missing route."""
    if m.dip == n.ip:
        return n, [Deliver(data=m.data, origin=m.oip)]
    e = n.valid_route(m.dip)
    if e is not None:
        fwd = replace(m, sip=n.ip)
        return n, [UnicastSend(e.nhop, fwd, FailurePolicy.GENERATE_RERR)]
    stale = n.route(m.dip)
    lost_dsn = (stale.dsn if stale is not None else 0) + 1
    if stale is not None:
        n = replace(n, rt=rt_put(n.rt, replace(stale, valid=False, dsn=lost_dsn, dsn_known=True)))
    return n, [BroadcastSend(Rerr(dests=((m.dip, lost_dsn),), sip=n.ip))]


def handle_rreq(n: NodeState, m: Rreq, variants: VariantFlags) -> tuple[NodeState, list[SendAction]]:
    """Process a route request.

    The reverse route to the originator is refreshed from every copy, even a
    duplicate, before the duplicate check drops it.  The first copy is then
    answered by the destination, answered from a fresh enough table entry,
    or forwarded.
    """
    if m.oip != n.ip:
        cand = RouteEntry(
            dip=m.oip, dsn=m.osn, dsn_known=True, valid=True,
            hops=m.hops + 1, nhop=m.sip,
        )
        rt2, _ = update_route(n.rt, cand)
        n = replace(n, rt=rt2)
    if (m.oip, m.rreq_id) in n.rreq_seen:
        return n, []
    n = replace(n, rreq_seen=n.rreq_seen | {(m.oip, m.rreq_id)})
    if n.ip == m.dip:
        n = replace(n, sn=max(n.sn, m.dsn))
        reply = Rrep(hops=0, dip=n.ip, dsn=n.sn, oip=m.oip, sip=n.ip)
        acts: list[SendAction] = [UnicastSend(m.sip, reply, FailurePolicy.DISCARD)]
        if variants.dest_forwards_rreq:
            acts.append(BroadcastSend(replace(m, hops=m.hops + 1, sip=n.ip)))
        return n, acts
    e = n.valid_route(m.dip)
    if e is not None and e.dsn_known and m.dsn_known and e.dsn >= m.dsn:
        # answer from the table; the requester becomes a precursor
        n = replace(n, rt=rt_put(n.rt, replace(e, precursors=e.precursors | {m.sip})))
        reply = Rrep(hops=e.hops, dip=m.dip, dsn=e.dsn, oip=m.oip, sip=n.ip)
        return n, [UnicastSend(m.sip, reply, FailurePolicy.DISCARD)]
    return n, [BroadcastSend(replace(m, hops=m.hops + 1, sip=n.ip))]


def handle_rrep(n: NodeState, m: Rrep, variants: VariantFlags) -> tuple[NodeState, list[SendAction]]:
    """Process a route reply.

    The originator flushes its queued payloads along the new route.  Anyone
    else forwards the reply toward the originator, but in the faithful
    protocol only when the reply improved their own table; a reply that
    taught them nothing is silently dropped, which is the root of the lost
    route replies.  forward_all_rreps removes that condition.
    """
    updated = False
    if m.dip != n.ip:
        cand = RouteEntry(
            dip=m.dip, dsn=m.dsn, dsn_known=True, valid=True,
            hops=m.hops + 1, nhop=m.sip,
        )
        rt2, updated = update_route(n.rt, cand)
        n = replace(n, rt=rt2)
    if n.ip == m.oip:
        pending = store_lookup(n.store, m.dip)
        e = n.valid_route(m.dip)
        if not pending or e is None:
            return n, []
        acts = [
            UnicastSend(e.nhop, Pkt(data=d, dip=m.dip, oip=n.ip, sip=n.ip), FailurePolicy.GENERATE_RERR)
            for d in pending
        ]
        return replace(n, store=store_clear(n.store, m.dip)), acts
    if updated or variants.forward_all_rreps:
        back = n.valid_route(m.oip)
        if back is None:
            return n, []
        e = n.route(m.dip)
        if e is not None:
            n = replace(n, rt=rt_put(n.rt, replace(e, precursors=e.precursors | {back.nhop})))
        fwd = Rrep(hops=m.hops + 1, dip=m.dip, dsn=m.dsn, oip=m.oip, sip=n.ip)
        return n, [UnicastSend(back.nhop, fwd, FailurePolicy.DISCARD)]
    return n, []


def handle_rerr(n: NodeState, m: Rerr) -> tuple[NodeState, list[SendAction]]:
    """Invalidate routes that ran through the reporting neighbour.

    Only losses that are news count: the route must currently be valid, use
    the sender as next hop, and carry an older dsn than reported.  The loss
    propagates only if some invalidated route had precursors to tell.
    """
    affected: list[tuple[int, int]] = []
    watchers: frozenset[int] = frozenset()
    for dip, sn in m.dests:
        e = n.valid_route(dip)
        if e is not None and e.nhop == m.sip and sn > e.dsn:
            affected.append((dip, sn))
            watchers = watchers | e.precursors
    if not affected:
        return n, []
    n = replace(n, rt=invalidate_routes(n.rt, dict(affected)))
    if watchers:
        return n, [BroadcastSend(Rerr(dests=tuple(sorted(affected)), sip=n.ip))]
    return n, []


def step_node(n: NodeState, variants: VariantFlags) -> tuple[NodeState, list[SendAction]]:
    """Pop the buffer head and run the matching handler, atomically."""
    assert n.msg_buf, "step_node needs a queued message"
    m = n.msg_buf[0]
    n = replace(n, msg_buf=n.msg_buf[1:])
    match m:
        case Newpkt(data=data, dip=dip):
            return handle_newpkt(n, data, dip)
        case Pkt():
            return handle_pkt(n, m)
        case Rreq():
            return handle_rreq(n, m, variants)
        case Rrep():
            return handle_rrep(n, m, variants)
        case Rerr():
            return handle_rerr(n, m)
    raise TypeError(f"unhandled message {m!r}")
