"""Acceptance suite: the ten checks this tool must satisfy.

One test per criterion, each ending in a single PASS/FAIL line on stdout
(run with `pytest tests/test_acceptance.py -v -s` to see the lines; `-v`
alone gives the same information through the test names).  Criteria 1-5
pin the three route-discovery defects and their two fixes, 6 bounds the
paper3 state space, 7-10 are sanity, loop freedom, oracle equivalence,
and transition invariants.
"""

import itertools
import re
from contextlib import contextmanager
from dataclasses import replace

from aodvmc.checker import check_af, check_ag, check_ef, explore
from aodvmc.core import Newpkt, Rrep, VariantFlags, rt_lookup
from aodvmc.msc import export_trace, replay_trace
from aodvmc.netmodel import Broadcast, Inject, LinkDown, LinkUp, NodeStep, Unicast
from aodvmc.properties import (
    Cmp,
    DeliveredQuery,
    IntLit,
    LoopFree,
    RtField,
    Truth,
    parse_property,
)
from aodvmc.scenario import Disconnect, parse_scenario

from oracle import oracle_af, oracle_ag, oracle_ef, reach_graph


@contextmanager
def criterion(num, title):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num} ({title}): FAIL")
        raise
    print(f"ACCEPTANCE {num} ({title}): PASS")


def _af_verdict(scen):
    return check_af(scen, scen.parsed_property().pred)


def _find_unicast_rrep(trace, sender, receiver, oip):
    for i, (label, _) in enumerate(trace.steps):
        if isinstance(label, NodeStep):
            for sub in label.sends:
                if (isinstance(sub, Unicast) and isinstance(sub.msg, Rrep)
                        and sub.sender == sender and sub.receiver == receiver
                        and sub.msg.oip == oip):
                    return i
    return None


def test_criterion_01_failed_route_discovery(paper1):
    with criterion(1, "failed route discovery refuted, reply visibly dropped"):
        ids = paper1.node_ids
        s, a, d = ids["s"], ids["a"], ids["d"]
        v = _af_verdict(paper1)
        assert not v.holds
        assert v.stats.elapsed < 5.0
        assert v.stats.reachable_states < 10**5

        # (i) d sends a route reply for origin s to a
        i = _find_unicast_rrep(v.trace, sender=d, receiver=a, oip=s)
        assert i is not None
        # (ii) a never passes any reply on to s afterwards
        assert _find_unicast_rrep(v.trace, sender=a, receiver=s, oip=s) is None
        for label, _ in v.trace.steps[i + 1:]:
            if isinstance(label, NodeStep):
                assert not any(isinstance(sub, Unicast) and isinstance(sub.msg, Rrep)
                               and sub.sender == a for sub in label.sends)
        # (iii) a already has a valid route to d when the reply is sent
        pre = v.trace.states(paper1)[i]
        e = rt_lookup(pre.node(a).rt, d)
        assert e is not None and e.valid
        # and the exported document shows it in a's snapshot before step i
        doc = export_trace(v.trace, paper1)
        blocks = doc.split("step: ")
        earlier = [b for b in blocks[1:] if int(b.split("\n", 1)[0]) < i]
        assert any(re.search(r"^node a: .*d=\(dsn=\d+\??,valid,", line)
                   for b in earlier for line in b.splitlines())


def test_criterion_02_forwarding_all_replies_fixes_discovery(paper1):
    with criterion(2, "forward_all_rreps variant makes discovery succeed"):
        fixed = replace(paper1, variants=VariantFlags(forward_all_rreps=True))
        v = _af_verdict(fixed)
        assert v.holds
        assert v.stats.elapsed < 10.0


def test_criterion_03_non_optimal_route_kept(paper2):
    with criterion(3, "duplicate suppression locks in a three-hop route"):
        ids = paper2.node_ids
        v = _af_verdict(paper2)
        assert not v.holds
        final = v.trace.steps[-1][1]
        e = rt_lookup(final.node(ids["s"]).rt, ids["d"])
        assert e is not None and e.hops == 3 and e.nhop == ids["b"]


def test_criterion_04_non_optimality_without_timing(paper3):
    with criterion(4, "non-optimal route arises on every schedule"):
        v = _af_verdict(paper3)
        assert not v.holds


def test_criterion_05_destination_forwarding_fix(paper3):
    with criterion(5, "dest_forwards_rreq variant restores the two-hop route"):
        fixed = replace(paper3, variants=VariantFlags(dest_forwards_rreq=True))
        v = _af_verdict(fixed)
        assert v.holds


def test_criterion_06_state_space_scale(paper3):
    with criterion(6, "paper3 reachable states within expected band"):
        stats = explore(paper3)
        assert 2_000 <= stats.reachable_states <= 200_000
        assert stats.elapsed < 10.0


def test_criterion_07_two_node_sanity():
    with criterion(7, "unobstructed discovery and delivery on two nodes"):
        scen = parse_scenario(
            "nodes: s d\nlinks: s d\nevents:\n  inject s d\n"
            "property: A<> rt[s][d].nhop != 0\n")
        route = Cmp("!=", RtField(1, 2, "nhop"), IntLit(0))
        got = Truth(DeliveredQuery(2, 1))
        assert check_af(scen, route).holds
        assert check_ef(scen, got).holds
        graph = reach_graph(scen)
        assert oracle_af(scen, route, graph=graph)
        assert oracle_ef(scen, got, graph=graph)


def test_criterion_08_loop_freedom(paper1, paper2, paper3):
    with criterion(8, "routing tables stay loop free"):
        pred = Truth(LoopFree())
        for scen in (paper1, paper2, paper3):
            assert check_ag(scen, pred).holds
        ids = paper1.node_ids
        cut = replace(paper1,
                      events=paper1.events + (Disconnect(ids["a"], ids["d"]),))
        assert check_ag(cut, pred).holds


def _script_family(names, links_all, alphabet):
    scripts = ([[]] + [[a] for a in alphabet]
               + [[a, b] for a in alphabet for b in alphabet])
    for mask in range(2 ** len(links_all)):
        links = [p for i, p in enumerate(links_all) if mask >> i & 1]
        for script in scripts:
            text = "nodes: " + " ".join(names) + "\n"
            if links:
                text += "links:\n" + "".join(f"  {a} {b}\n" for a, b in links)
            if script:
                text += "events:\n" + "".join(f"  {e}\n" for e in script)
            text += "property: A[] loop_free\n"
            yield parse_scenario(text)


def test_criterion_09_oracle_equivalence():
    with criterion(9, "verdicts match the brute-force path oracle"):
        two = _script_family(
            ("s", "d"), [("s", "d")],
            ["inject s d", "inject d s", "disconnect s d", "connect s d"])
        three = _script_family(
            ("x", "y", "z"),
            [("x", "y"), ("x", "z"), ("y", "z")],
            ["inject x z", "inject z x", "inject y x",
             "disconnect x z", "connect x z"])
        checked = 0
        for scen in itertools.chain(two, three):
            last = scen.n
            preds = [
                Cmp("!=", RtField(1, last, "nhop"), IntLit(0)),
                Truth(LoopFree()),
                Truth(DeliveredQuery(last, 1)),
            ]
            graph = reach_graph(scen)
            for pred in preds:
                for check, oracle in ((check_af, oracle_af),
                                      (check_ag, oracle_ag),
                                      (check_ef, oracle_ef)):
                    v = check(scen, pred)
                    assert v.holds == oracle(scen, pred, graph=graph)
                    if v.trace is not None:
                        replay_trace(v.trace, scen)
                    checked += 1
        assert checked == (2 * 21 + 8 * 31) * 9


def _check_edge(pre, label, post, scen, bad):
    if post.tester_pc != pre.tester_pc + (0 if isinstance(label, NodeStep) else 1):
        bad.append(f"tester pc wrong across {label}")
    if isinstance(label, (LinkUp, LinkDown)):
        if post.nodes != pre.nodes:
            bad.append(f"link toggle touched node state: {label}")
        return
    if post.topo != pre.topo:
        bad.append(f"topology changed by non-link step: {label}")
    if not pre.delivered <= post.delivered:
        bad.append(f"delivery log shrank: {label}")

    expect_append = {ip: [] for ip in range(1, scen.n + 1)}
    actor = None
    if isinstance(label, Inject):
        ev = scen.events[pre.tester_pc]
        expect_append[label.at].append(Newpkt(data=ev.data, dip=ev.dest))
    elif isinstance(label, NodeStep):
        actor = label.node
        for sub in label.sends:
            if isinstance(sub, Broadcast):
                if sub.receivers != frozenset(pre.topo.neighbors(sub.sender)):
                    bad.append(f"broadcast footprint off: {label}")
                for r in sub.receivers:
                    expect_append[r].append(sub.msg)
            elif isinstance(sub, Unicast):
                expect_append[sub.receiver].append(sub.msg)

    for ip in range(1, scen.n + 1):
        b, a = pre.node(ip), post.node(ip)
        base = b.msg_buf[1:] if ip == actor else b.msg_buf
        if a.msg_buf != base + tuple(expect_append[ip]):
            bad.append(f"buffer of {scen.name_of(ip)} not FIFO across {label}")
        if ip != actor:
            if replace(b, msg_buf=()) != replace(a, msg_buf=()):
                bad.append(f"bystander {scen.name_of(ip)} changed by {label}")
            continue
        if a.sn < b.sn:
            bad.append(f"sn dropped at {scen.name_of(ip)}: {label}")
        for e in b.rt:
            e2 = rt_lookup(a.rt, e.dip)
            if e2 is None:
                bad.append(f"route entry deleted at {scen.name_of(ip)}: {label}")
            elif e2.dsn < e.dsn or (e.dsn_known and not e2.dsn_known):
                bad.append(f"dsn weakened at {scen.name_of(ip)}: {label}")


def test_criterion_10_transition_invariants(paper1, paper2, paper3):
    with criterion(10, "per-edge invariants hold on the full paper1-3 graphs"):
        for scen in (paper1, paper2, paper3):
            bad = []
            seen = [0]

            def on_edge(pre, label, post, scen=scen, bad=bad, seen=seen):
                seen[0] += 1
                _check_edge(pre, label, post, scen, bad)

            stats = explore(scen, on_edge=on_edge)
            assert seen[0] == stats.transitions
            assert bad == [], bad[:5]
