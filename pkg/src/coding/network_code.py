# NetworkCode and the bit layout every encoder, decoder and key is defined over
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple

from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance
from .functions import EdgeFunction, KeyMap

# Packed words are numpy int64; one bit is kept clear for the sign.
MAX_WORD_BITS = 62

Coord = Tuple[str, int]


@dataclass(frozen=True)
class NetworkCode:
    """(F, G) at blocklength n, plus the key map K = f(m)."""

    blocklength: int
    source_bits: Mapping[str, int]
    edge_encoders: Mapping[str, EdgeFunction]
    decoders: Mapping[str, EdgeFunction]
    key: KeyMap
    message_coords: Optional[Tuple[Coord, ...]] = None

    @property
    def key_bits(self) -> int:
        return self.key.key_bits

    def parts(self) -> List[EdgeFunction]:
        return list(self.edge_encoders.values()) + list(self.decoders.values()) + [self.key.function]

    def with_changes(self, **changes: Any) -> "NetworkCode":
        return replace(self, **changes)


@dataclass(frozen=True)
class Segment:
    """One contiguous piece of a node's packed input: an edge message or local source bits."""

    kind: str  # "edge" | "source"
    name: str
    width: int


@dataclass(frozen=True)
class CodeLayout:
    """Widths and bit positions implied by an instance, a blocklength and per-source bit counts."""

    blocklength: int
    sources: Tuple[str, ...]
    source_bits: Mapping[str, int]
    source_offset: Mapping[str, int]
    edge_width: Mapping[str, int]
    inputs: Mapping[str, Tuple[Segment, ...]] = field(default_factory=dict)

    @property
    def total_bits(self) -> int:
        return sum(self.source_bits[s] for s in self.sources)

    def input_width(self, node: str) -> int:
        return sum(seg.width for seg in self.inputs.get(node, ()))

    def global_bit(self, coord: Coord) -> int:
        """MSB-first index of b_{s,j} inside m."""
        node, j = coord
        return self.source_offset[node] + j

    def valid_coord(self, coord: Coord) -> bool:
        node, j = coord
        return node in self.source_bits and 0 <= j < self.source_bits[node]

    def all_coords(self) -> List[Coord]:
        return sorted((s, j) for s in self.sources for j in range(self.source_bits[s]))

    def input_layout(self, node: str) -> List[Dict[str, Any]]:
        """The documented input order of `node`, most significant segment first."""
        layout, offset = [], 0
        for seg in self.inputs.get(node, ()):
            layout.append({"kind": seg.kind, "name": seg.name, "offset": offset, "width": seg.width})
            offset += seg.width
        return layout


def edge_width(instance: NetworkInstance, edge_id: str, blocklength: int) -> int:
    bits = instance.edge(edge_id).bits(blocklength)
    if bits.denominator != 1:
        raise KeycastError(
            ErrorCode.NONINTEGRAL_ALPHABET,
            f"edge '{edge_id}' carries {bits} bits per block at n={blocklength}; c_e*n must be an integer",
            edge=edge_id,
        )
    return int(bits)


def build_layout(instance: NetworkInstance, blocklength: int, source_bits: Mapping[str, int]) -> CodeLayout:
    if blocklength < 1:
        raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"blocklength must be positive, got {blocklength}")
    declared = set(instance.source_nodes)
    if set(source_bits) != declared:
        raise KeycastError(
            ErrorCode.WIDTH_MISMATCH,
            f"source_bits names {sorted(source_bits)} but the instance declares {sorted(declared)}",
        )
    if any(int(v) < 0 for v in source_bits.values()):
        raise KeycastError(ErrorCode.WIDTH_MISMATCH, "source bit counts must be nonnegative")

    offsets, cursor = {}, 0
    for node in instance.source_nodes:
        offsets[node] = cursor
        cursor += int(source_bits[node])
    if cursor > MAX_WORD_BITS:
        raise KeycastError(ErrorCode.SPACE_LIMIT, f"l={cursor} source bits exceed {MAX_WORD_BITS}", bits=cursor)

    widths = {e.id: edge_width(instance, e.id, blocklength) for e in instance.edges}
    inputs: Dict[str, Tuple[Segment, ...]] = {}
    for node in instance.nodes:
        segments = [Segment("edge", e.id, widths[e.id]) for e in instance.in_edges(node)]
        if node in declared and source_bits[node]:
            segments.append(Segment("source", node, int(source_bits[node])))
        width = sum(s.width for s in segments)
        if width > MAX_WORD_BITS:
            raise KeycastError(ErrorCode.SPACE_LIMIT, f"node '{node}' has a {width}-bit input", node=node)
        inputs[node] = tuple(segments)

    return CodeLayout(
        blocklength=blocklength,
        sources=instance.source_nodes,
        source_bits={s: int(source_bits[s]) for s in instance.source_nodes},
        source_offset=offsets,
        edge_width=widths,
        inputs=inputs,
    )


def layout_for(instance: NetworkInstance, code: NetworkCode) -> CodeLayout:
    return build_layout(instance, code.blocklength, code.source_bits)


def _expect(function: EdgeFunction, in_bits: int, out_bits: int, what: str) -> None:
    if function.in_bits != in_bits or function.out_bits != out_bits:
        raise KeycastError(
            ErrorCode.WIDTH_MISMATCH,
            f"{what} maps {function.in_bits}->{function.out_bits} bits, expected {in_bits}->{out_bits}",
        )


def check_code(instance: NetworkInstance, code: NetworkCode) -> CodeLayout:
    """Raise on any width rule a code breaks; returns the layout it was checked against."""
    layout = layout_for(instance, code)

    edge_ids = {e.id for e in instance.edges}
    missing = sorted(edge_ids - set(code.edge_encoders))
    extra = sorted(set(code.edge_encoders) - edge_ids)
    if missing or extra:
        raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"encoders missing for {missing}, unknown edges {extra}")
    for edge in instance.edges:
        _expect(code.edge_encoders[edge.id], layout.input_width(edge.tail), layout.edge_width[edge.id],
                f"encoder of edge '{edge.id}'")

    missing = sorted(set(instance.terminals) - set(code.decoders))
    extra = sorted(set(code.decoders) - set(instance.terminals))
    if missing or extra:
        raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"decoders missing for {missing}, unknown terminals {extra}")
    for terminal in instance.terminals:
        _expect(code.decoders[terminal], layout.input_width(terminal), code.key_bits,
                f"decoder of terminal '{terminal}'")

    if code.key.in_bits != layout.total_bits:
        raise KeycastError(
            ErrorCode.WIDTH_MISMATCH,
            f"key map reads {code.key.in_bits} bits but the code generates l={layout.total_bits}",
        )
    if code.message_coords is not None:
        for coord in code.message_coords:
            if not layout.valid_coord(tuple(coord)):
                raise KeycastError(ErrorCode.BAD_COORDS, f"message coordinate {coord} is outside the sources")
    return layout
