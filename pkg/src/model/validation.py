# Instance validation; violations are reported as data, never raised
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List

import networkx as nx

from .instance import NetworkInstance


class ViolationCode(str, Enum):
    ACYCLICITY = "ACYCLICITY"
    DANGLING_REF = "DANGLING_REF"
    BAD_CAPACITY = "BAD_CAPACITY"
    DUPLICATE_ID = "DUPLICATE_ID"
    EMPTY_EAVESDROP_SET = "EMPTY_EAVESDROP_SET"


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    subject: str
    message: str

    def to_dict(self) -> Dict[str, str]:
        return {"code": self.code.value, "subject": self.subject, "message": self.message}


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    notes: List[Dict[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [v.code.value for v in self.violations]

    def add(self, code: ViolationCode, subject: str, message: str) -> None:
        self.violations.append(Violation(code, subject, message))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": "keycast-validation/1",
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "notes": list(self.notes),
        }


def _duplicates(values) -> List[str]:
    return sorted(v for v, c in Counter(values).items() if c > 1)


def validate(instance: NetworkInstance) -> ValidationReport:
    """Check every structural invariant of an instance."""
    report = ValidationReport()
    nodes = set(instance.nodes)

    for dup in _duplicates(instance.nodes):
        report.add(ViolationCode.DUPLICATE_ID, dup, f"node '{dup}' declared more than once")
    for dup in _duplicates(e.id for e in instance.edges):
        report.add(ViolationCode.DUPLICATE_ID, dup, f"edge '{dup}' declared more than once")
    for dup in _duplicates(instance.source_nodes):
        report.add(ViolationCode.DUPLICATE_ID, dup, f"source '{dup}' listed more than once")
    for dup in _duplicates(instance.terminals):
        report.add(ViolationCode.DUPLICATE_ID, dup, f"terminal '{dup}' listed more than once")

    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    for edge in instance.edges:
        dangling = [n for n in (edge.tail, edge.head) if n not in nodes]
        if dangling:
            report.add(ViolationCode.DANGLING_REF, edge.id,
                       f"edge '{edge.id}' references unknown node(s) {', '.join(dangling)}")
            continue
        if edge.tail == edge.head:
            report.add(ViolationCode.ACYCLICITY, edge.id, f"edge '{edge.id}' is a self-loop")
            continue
        if edge.capacity <= 0:
            report.add(ViolationCode.BAD_CAPACITY, edge.id,
                       f"edge '{edge.id}' has non-positive capacity {edge.capacity}")
        graph.add_edge(edge.tail, edge.head)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        report.add(ViolationCode.ACYCLICITY, cycle[0][0],
                   "graph has a directed cycle through " + " -> ".join(u for u, _ in cycle))

    for node in instance.source_nodes:
        if node not in nodes:
            report.add(ViolationCode.DANGLING_REF, node, f"source '{node}' is not a node")
    for node in instance.terminals:
        if node not in nodes:
            report.add(ViolationCode.DANGLING_REF, node, f"terminal '{node}' is not a node")

    source_nodes = set(instance.source_nodes)
    for index, beta in enumerate(instance.eavesdrop_sets):
        subject = f"eavesdrop_sets[{index}]"
        if not beta.edges and not beta.observed_sources:
            report.add(ViolationCode.EMPTY_EAVESDROP_SET, subject, "eavesdrop set observes nothing")
        for edge_id in sorted(beta.edges):
            if not instance.has_edge(edge_id):
                report.add(ViolationCode.DANGLING_REF, subject, f"unknown edge '{edge_id}'")
        for node in sorted(beta.observed_sources):
            if node not in source_nodes:
                report.add(ViolationCode.DANGLING_REF, subject, f"'{node}' is not a source")

    # Terminals that are also sources are legal; surface them as a note only.
    for node in instance.terminals:
        if node in source_nodes:
            report.notes.append({"code": "SOURCE_TERMINAL_OVERLAP", "subject": node,
                                 "message": f"'{node}' is both a source and a terminal"})
    return report
