# Graph computations on instances: topological order and exact min-cut
from fractions import Fraction
from typing import Iterable, List

import networkx as nx

from ..errors import ErrorCode, KeycastError
from .instance import NetworkInstance

SUPER_SOURCE = "__keycast_super_source__"


def to_digraph(instance: NetworkInstance) -> nx.DiGraph:
    """Simple digraph of the instance; parallel edges are merged, capacities summed."""
    graph = nx.DiGraph()
    graph.add_nodes_from(instance.nodes)
    for edge in instance.edges:
        if graph.has_edge(edge.tail, edge.head):
            graph[edge.tail][edge.head]["capacity"] += edge.capacity
        else:
            graph.add_edge(edge.tail, edge.head, capacity=Fraction(edge.capacity))
    return graph


def topological_order(instance: NetworkInstance) -> List[str]:
    """Topological order with ties broken by ascending node id."""
    graph = to_digraph(instance)
    try:
        return list(nx.lexicographical_topological_sort(graph))
    except nx.NetworkXUnfeasible as exc:
        raise KeycastError(ErrorCode.CYCLIC, "instance graph contains a directed cycle") from exc


def min_cut(instance: NetworkInstance, source_set: Iterable[str], sink: str) -> Fraction:
    """
    Max-flow value from a super-source feeding every node of source_set to sink.

    Capacities stay Fractions end to end; the super-source edges carry no
    capacity attribute, which networkx treats as unbounded.
    """
    sources = sorted(set(source_set))
    known = set(instance.nodes)
    for node in sources + [sink]:
        if node not in known:
            raise KeycastError(ErrorCode.UNKNOWN_NODE, f"unknown node '{node}'", node=node)
    if sink in sources:
        raise KeycastError(ErrorCode.SINK_IN_SOURCES, f"sink '{sink}' is in the source set", node=sink)
    if not sources:
        return Fraction(0)

    graph = to_digraph(instance)
    graph.add_node(SUPER_SOURCE)
    for node in sources:
        graph.add_edge(SUPER_SOURCE, node)
    value = nx.maximum_flow_value(
        graph, SUPER_SOURCE, sink, flow_func=nx.algorithms.flow.edmonds_karp
    )
    return Fraction(value)


def multicast_cut_bound(instance: NetworkInstance) -> Fraction:
    """min over terminals of min_cut(all sources, d); 0 when there are no terminals."""
    sources = instance.source_nodes
    values = [
        min_cut(instance, [s for s in sources if s != d], d)
        for d in instance.terminals
    ]
    return min(values) if values else Fraction(0)
