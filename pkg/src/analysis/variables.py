# Random variables of a code: what a CountTable can be built over
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..coding import BlockTrace, CodeLayout, Coord, NetworkCode
from ..model import EavesdropSet, NetworkInstance


@dataclass(frozen=True)
class Variable:
    """A deterministic function of m: an edge message, a decoder output, the key, or source bits."""

    kind: str  # edge | decoder | key | input | source | bits
    name: str
    width: int
    coords: Tuple[Coord, ...] = ()

    @property
    def label(self) -> str:
        if self.kind == "key":
            return "key"
        if self.kind == "bits":
            return "bits:" + ",".join(f"{s}[{j}]" for s, j in self.coords)
        return f"{self.kind}:{self.name}"

    def values(self, block: BlockTrace) -> np.ndarray:
        if self.kind == "edge":
            return block.edges[self.name]
        if self.kind == "decoder":
            return block.decoders[self.name]
        if self.kind == "key":
            return block.key
        if self.kind == "input":
            return block.node_input(self.name)
        if self.kind == "source":
            return block.sources[self.name]
        packed = np.zeros(block.assignments.shape, dtype=np.int64)
        for node, j in self.coords:
            packed = (packed << 1) | block.source_bit(node, j)
        return packed


def edge_var(layout: CodeLayout, edge_id: str) -> Variable:
    return Variable("edge", edge_id, layout.edge_width[edge_id])


def decoder_var(code: NetworkCode, terminal: str) -> Variable:
    return Variable("decoder", terminal, code.key_bits)


def key_var(code: NetworkCode) -> Variable:
    return Variable("key", "K", code.key_bits)


def input_var(layout: CodeLayout, node: str) -> Variable:
    return Variable("input", node, layout.input_width(node))


def source_var(layout: CodeLayout, node: str) -> Variable:
    return Variable("source", node, layout.source_bits[node])


def bits_var(coords: Sequence[Coord]) -> Variable:
    coords = tuple((str(s), int(j)) for s, j in coords)
    return Variable("bits", ",".join(f"{s}[{j}]" for s, j in coords), len(coords), coords)


def eavesdrop_view(instance: NetworkInstance, layout: CodeLayout, beta: EavesdropSet) -> List[Variable]:
    """Edges of beta sorted by id, then full bit vectors of observed sources in declaration order."""
    view = [edge_var(layout, e) for e in sorted(beta.edges)]
    view += [source_var(layout, s) for s in instance.source_nodes if s in beta.observed_sources]
    return view
