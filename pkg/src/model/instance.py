# Network-coding instances: DAG, capacities, sources, terminals, eavesdroppers
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple


class SourceRole(str, Enum):
    """Which source sets a node belongs to (S_m, S_r, or both)."""

    MESSAGE = "message"
    RANDOM = "random"
    BOTH = "both"

    @property
    def holds_messages(self) -> bool:
        return self in (SourceRole.MESSAGE, SourceRole.BOTH)

    @property
    def holds_randomness(self) -> bool:
        return self in (SourceRole.RANDOM, SourceRole.BOTH)


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    capacity: Fraction

    def bits(self, blocklength: int) -> Fraction:
        """c_e * n, the edge's bit budget for one block (not necessarily integral)."""
        return self.capacity * blocklength


@dataclass(frozen=True)
class SourceDecl:
    node: str
    role: SourceRole = SourceRole.BOTH


@dataclass(frozen=True)
class EavesdropSet:
    """Edges whose messages an eavesdropper reads, plus sources whose bits it sees."""

    edges: FrozenSet[str] = frozenset()
    observed_sources: FrozenSet[str] = frozenset()

    @classmethod
    def of(cls, edges: Iterable[str] = (), observed_sources: Iterable[str] = ()) -> "EavesdropSet":
        return cls(frozenset(edges), frozenset(observed_sources))


@dataclass(frozen=True)
class NetworkInstance:
    """An instance (G, S, D, B); immutable once built."""

    nodes: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    sources: Tuple[SourceDecl, ...]
    terminals: Tuple[str, ...]
    eavesdrop_sets: Tuple[EavesdropSet, ...] = ()
    family: Optional[str] = None
    params: Mapping[str, Any] = field(default_factory=dict, compare=False)
    _edge_index: Dict[str, Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_edge_index", {e.id: e for e in self.edges})

    # Lookups

    def edge(self, edge_id: str) -> Edge:
        return self._edge_index[edge_id]

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edge_index

    @property
    def source_nodes(self) -> Tuple[str, ...]:
        """Source node ids in declaration order; this order fixes the layout of m."""
        return tuple(s.node for s in self.sources)

    def source_role(self, node: str) -> Optional[SourceRole]:
        for decl in self.sources:
            if decl.node == node:
                return decl.role
        return None

    def is_source(self, node: str) -> bool:
        return self.source_role(node) is not None

    @property
    def message_sources(self) -> Tuple[str, ...]:
        return tuple(s.node for s in self.sources if s.role.holds_messages)

    @property
    def random_sources(self) -> Tuple[str, ...]:
        return tuple(s.node for s in self.sources if s.role.holds_randomness)

    def in_edges(self, node: str) -> List[Edge]:
        """In(node), sorted by edge id."""
        return sorted((e for e in self.edges if e.head == node), key=lambda e: e.id)

    def out_edges(self, node: str) -> List[Edge]:
        """Out(node), sorted by edge id."""
        return sorted((e for e in self.edges if e.tail == node), key=lambda e: e.id)

    def with_changes(self, **changes: Any) -> "NetworkInstance":
        return replace(self, **changes)


def refine_to_secure(instance: NetworkInstance) -> NetworkInstance:
    """The secure-multicast refinement: every source both holds messages and masks."""
    return instance.with_changes(
        sources=tuple(SourceDecl(s.node, SourceRole.BOTH) for s in instance.sources)
    )


def make_edge(tail: str, head: str, capacity=1, edge_id: Optional[str] = None) -> Edge:
    """Edge with id 'tail>head' unless an id is given."""
    return Edge(edge_id or f"{tail}>{head}", tail, head, Fraction(capacity))
