"""Reference verdicts computed the slow, obvious way.

The checker proper searches on the fly; here we materialise the whole
reachable graph with a plain stack walk and decide each quantifier straight
from the path semantics, using networkx for cycle detection.  Agreement
between the two is the main correctness argument for the search code.
"""

import networkx as nx

from aodvmc.netmodel import initial_state, successors
from aodvmc.properties import eval_pred


def reach_graph(scen):
    """(initial state, {state: [(label, successor), ...]}) for the whole space."""
    g0 = initial_state(scen)
    edges = {}
    stack = [g0]
    while stack:
        g = stack.pop()
        if g in edges:
            continue
        succ = successors(g, scen)
        edges[g] = succ
        for _, g2 in succ:
            if g2 not in edges:
                stack.append(g2)
    return g0, edges


def oracle_ef(scen, pred, graph=None):
    _, edges = graph or reach_graph(scen)
    return any(eval_pred(pred, g) for g in edges)


def oracle_ag(scen, pred, graph=None):
    _, edges = graph or reach_graph(scen)
    return all(eval_pred(pred, g) for g in edges)


def oracle_af(scen, pred, graph=None):
    """A<> pred: no maximal path may avoid pred forever.

    Collect the states reachable from the start through pred-free prefixes
    only.  A maximal pred-free path exists iff that set contains a deadlock
    of the full graph or a cycle.
    """
    g0, edges = graph or reach_graph(scen)
    if eval_pred(pred, g0):
        return True
    avoid = {g0}
    frontier = [g0]
    while frontier:
        g = frontier.pop()
        for _, g2 in edges[g]:
            if g2 not in avoid and not eval_pred(pred, g2):
                avoid.add(g2)
                frontier.append(g2)
    if any(not edges[g] for g in avoid):
        return False
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(len(avoid)))
    index = {g: i for i, g in enumerate(avoid)}
    for g in avoid:
        for _, g2 in edges[g]:
            if g2 in avoid:
                digraph.add_edge(index[g], index[g2])
    return nx.is_directed_acyclic_graph(digraph)
