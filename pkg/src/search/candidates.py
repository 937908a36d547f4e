# The candidate space of a CodeShape: a mixed-radix stream of encoder assignments
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..coding import EdgeFunction, Gf2Matrix, KeyMap, NetworkCode, TruthTable, build_layout, split_sources
from ..config import get_settings
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance, topological_order
from .shape import CodeShape, EncoderFamily, SourceBehavior

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Slot:
    """A free encoder: which edge, its widths, and how many functions it ranges over."""

    edge: str
    in_bits: int
    out_bits: int
    radix: int


def _table_from_digit(digit: int, in_bits: int, out_bits: int) -> np.ndarray:
    # entry 0 is the most significant base-2^out digit
    entries = 1 << in_bits
    shifts = out_bits * np.arange(entries - 1, -1, -1, dtype=object)
    mask = (1 << out_bits) - 1
    return np.array([(digit >> int(s)) & mask for s in shifts], dtype=np.int64)


def _matrix_from_digit(digit: int, in_bits: int, out_bits: int) -> Gf2Matrix:
    # row-major, first entry most significant
    size = in_bits * out_bits
    bits = [(digit >> (size - 1 - i)) & 1 for i in range(size)]
    return Gf2Matrix(np.array(bits, dtype=np.uint8).reshape(out_bits, in_bits))


@lru_cache(maxsize=4096)
def slot_function(family: EncoderFamily, in_bits: int, out_bits: int, digit: int) -> EdgeFunction:
    if family is EncoderFamily.LINEAR:
        return _matrix_from_digit(digit, in_bits, out_bits)
    return TruthTable(in_bits, out_bits, _table_from_digit(digit, in_bits, out_bits))


class CandidateSpace:
    """
    All codes of a shape on an instance, indexed 0..count-1.

    Free encoders are the slots, ordered by edge id; position p is read in mixed
    radix with the first slot most significant, so the stream is lexicographic
    over the concatenated encoder descriptions. Decoders and the key are
    placeholders: searches induce decoders from the key they select.
    """

    def __init__(self, instance: NetworkInstance, shape: CodeShape, budget: Optional[int] = None,
                 search_cap: Optional[int] = None):
        settings = get_settings()
        budget = settings.budget if budget is None else budget
        search_cap = settings.search_cap if search_cap is None else search_cap

        self.instance = instance
        self.shape = shape
        self.layout = build_layout(instance, shape.blocklength, shape.source_bits(instance))
        if self.layout.total_bits > search_cap:
            raise KeycastError(ErrorCode.SPACE_LIMIT,
                               f"shape generates l={self.layout.total_bits} bits; search cap is {search_cap}",
                               bits=self.layout.total_bits, cap=search_cap)

        self.fixed: Dict[str, Gf2Matrix] = {}
        self.slots: List[Slot] = []
        for edge in sorted(instance.edges, key=lambda e: e.id):
            in_bits = self.layout.input_width(edge.tail)
            out_bits = self.layout.edge_width[edge.id]
            if shape.sources is SourceBehavior.FORWARD and instance.is_source(edge.tail):
                self.fixed[edge.id] = self._forward_matrix(edge.tail, in_bits, out_bits)
                continue
            if shape.family is EncoderFamily.LINEAR:
                radix = 1 << (in_bits * out_bits)
            else:
                radix = 1 << (out_bits << in_bits)
            self.slots.append(Slot(edge.id, in_bits, out_bits, radix))

        self.count = prod(s.radix for s in self.slots) if instance.edges else 0
        if self.count > budget:
            raise KeycastError(ErrorCode.BUDGET_EXCEEDED,
                               f"shape {shape.to_text()} has {self.count} candidates; budget is {budget}",
                               candidates=str(self.count), budget=budget)
        self._weights = []
        weight = 1
        for slot in reversed(self.slots):
            self._weights.append(weight)
            weight *= slot.radix
        self._weights.reverse()
        self._order = [n for n in topological_order(instance) if instance.out_edges(n)]
        self._assignments = np.arange(1 << self.layout.total_bits, dtype=np.int64)
        self._sources = split_sources(self.layout, self._assignments)
        self._fixed_tables = {e: f.to_table() for e, f in self.fixed.items()}

    def _forward_matrix(self, source: str, in_bits: int, out_bits: int) -> Gf2Matrix:
        own = self.layout.source_bits[source]
        bits = np.zeros((out_bits, in_bits), dtype=np.uint8)
        if own:
            for row in range(out_bits):
                bits[row, in_bits - own + row % own] = 1
        return Gf2Matrix(bits)

    def digits(self, position: int) -> List[int]:
        if not 0 <= position < self.count:
            raise IndexError(f"position {position} outside 0..{self.count - 1}")
        return [(position // w) % s.radix for w, s in zip(self._weights, self.slots)]

    def encoders_at(self, position: int) -> Dict[str, EdgeFunction]:
        encoders: Dict[str, EdgeFunction] = dict(self.fixed)
        for slot, digit in zip(self.slots, self.digits(position)):
            encoders[slot.edge] = slot_function(self.shape.family, slot.in_bits, slot.out_bits, digit)
        return encoders

    def code_at(self, position: int) -> NetworkCode:
        layout = self.layout
        return NetworkCode(
            blocklength=self.shape.blocklength,
            source_bits=dict(layout.source_bits),
            edge_encoders=self.encoders_at(position),
            decoders={d: Gf2Matrix.zeros(0, layout.input_width(d)) for d in self.instance.terminals},
            key=KeyMap(Gf2Matrix.zeros(0, layout.total_bits)),
        )

    def edge_values(self, position: int) -> Dict[str, np.ndarray]:
        """Every edge message over all 2^l assignments, by table lookup."""
        tables = dict(self._fixed_tables)
        for slot, digit in zip(self.slots, self.digits(position)):
            tables[slot.edge] = slot_function(self.shape.family, slot.in_bits, slot.out_bits, digit).to_table()
        values: Dict[str, np.ndarray] = {}
        for node in self._order:
            packed = self.pack_input(node, values)
            for edge in self.instance.out_edges(node):
                values[edge.id] = tables[edge.id][packed]
        return values

    def pack_input(self, node: str, values: Dict[str, np.ndarray]) -> np.ndarray:
        packed = np.zeros(self._assignments.shape, dtype=np.int64)
        for seg in self.layout.inputs.get(node, ()):
            part = values[seg.name] if seg.kind == "edge" else self._sources[seg.name]
            packed = (packed << seg.width) | part
        return packed

    @property
    def assignments(self) -> np.ndarray:
        return self._assignments

    @property
    def source_values(self) -> Dict[str, np.ndarray]:
        return self._sources


def enumerate_codes(
    instance: NetworkInstance,
    shape: CodeShape,
    start: int = 0,
    stop: Optional[int] = None,
    budget: Optional[int] = None,
) -> Iterator[NetworkCode]:
    """Codes of the shape in stream order, from `start` (a cursor) up to `stop`."""
    space = CandidateSpace(instance, shape, budget)
    stop = space.count if stop is None else min(stop, space.count)
    for position in range(start, stop):
        yield space.code_at(position)


def count_candidates(instance: NetworkInstance, shape: CodeShape, budget: Optional[int] = None) -> Tuple[int, int]:
    """(number of candidates, number of free slots)."""
    space = CandidateSpace(instance, shape, budget)
    return space.count, len(space.slots)
