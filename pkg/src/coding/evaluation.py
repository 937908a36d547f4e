# Forward evaluation of network codes over source assignments
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..config import get_settings
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance, topological_order
from .functions import KeyMap, TruthTable, as_truth_table
from .gf2 import Gf2Matrix
from .network_code import CodeLayout, NetworkCode, build_layout, check_code


@dataclass
class BlockTrace:
    """Every variable of a code evaluated on an array of assignments."""

    layout: CodeLayout
    assignments: np.ndarray
    sources: Dict[str, np.ndarray]
    edges: Dict[str, np.ndarray]
    decoders: Dict[str, np.ndarray]
    key: np.ndarray

    def node_input(self, node: str) -> np.ndarray:
        """X_In(node) packed in layout order."""
        packed = np.zeros(self.assignments.shape, dtype=np.int64)
        for seg in self.layout.inputs.get(node, ()):
            value = self.edges[seg.name] if seg.kind == "edge" else self.sources[seg.name]
            packed = (packed << seg.width) | value
        return packed

    def source_bit(self, node: str, j: int) -> np.ndarray:
        width = self.layout.source_bits[node]
        return (self.sources[node] >> (width - 1 - j)) & 1


@dataclass(frozen=True)
class EvaluationTrace:
    assignment: int
    edge_messages: Dict[str, int]
    decoder_outputs: Dict[str, int]
    key_value: int


def split_sources(layout: CodeLayout, assignments: np.ndarray) -> Dict[str, np.ndarray]:
    """Per-source bit vectors of each assignment (b_{s,0} most significant)."""
    total = layout.total_bits
    values = {}
    for node in layout.sources:
        width = layout.source_bits[node]
        shift = total - layout.source_offset[node] - width
        values[node] = (assignments >> shift) & ((1 << width) - 1)
    return values


def evaluate_block(
    instance: NetworkInstance,
    code: NetworkCode,
    assignments: np.ndarray,
    layout: Optional[CodeLayout] = None,
) -> BlockTrace:
    """Vectorised evaluation in topological order; `layout` skips re-checking a known-good code."""
    layout = layout or check_code(instance, code)
    assignments = np.asarray(assignments, dtype=np.int64)
    trace = BlockTrace(
        layout=layout,
        assignments=assignments,
        sources=split_sources(layout, assignments),
        edges={},
        decoders={},
        key=code.key.apply_block(assignments),
    )
    for node in topological_order(instance):
        out_edges = instance.out_edges(node)
        if not out_edges:
            continue
        packed = trace.node_input(node)
        for edge in out_edges:
            trace.edges[edge.id] = code.edge_encoders[edge.id].apply_block(packed)
    for terminal in instance.terminals:
        trace.decoders[terminal] = code.decoders[terminal].apply_block(trace.node_input(terminal))
    return trace


def evaluate(instance: NetworkInstance, code: NetworkCode, assignment: int) -> EvaluationTrace:
    layout = check_code(instance, code)
    if not 0 <= assignment < 1 << layout.total_bits:
        raise KeycastError(
            ErrorCode.WIDTH_MISMATCH,
            f"assignment {assignment:#x} does not fit in l={layout.total_bits} bits",
        )
    block = evaluate_block(instance, code, np.array([assignment], dtype=np.int64), layout)
    return EvaluationTrace(
        assignment=assignment,
        edge_messages={e: int(v[0]) for e, v in sorted(block.edges.items())},
        decoder_outputs={d: int(v[0]) for d, v in sorted(block.decoders.items())},
        key_value=int(block.key[0]),
    )


def _enforce_cap(bits: int, cap: Optional[int], what: str) -> None:
    cap = get_settings().enum_cap if cap is None else cap
    if bits > cap:
        raise KeycastError(ErrorCode.SPACE_LIMIT, f"{what} needs 2^{bits} entries; cap is 2^{cap}",
                           bits=bits, cap=cap)


def global_key_map(instance: NetworkInstance, code: NetworkCode, enum_cap: Optional[int] = None) -> KeyMap:
    """The key map materialised as a truth table over all 2^l assignments."""
    layout = check_code(instance, code)
    _enforce_cap(layout.total_bits, enum_cap, "materialising the key map")
    return code.key.as_truth_table()


def is_linear(code: NetworkCode) -> bool:
    return all(isinstance(part, Gf2Matrix) for part in code.parts())


def linear_to_general(code: NetworkCode, enum_cap: Optional[int] = None) -> NetworkCode:
    """Same code with every GF(2) part replaced by its truth table."""
    for part in code.parts():
        _enforce_cap(part.in_bits, enum_cap, "tabulating a linear part")
    return code.with_changes(
        edge_encoders={e: as_truth_table(f) for e, f in code.edge_encoders.items()},
        decoders={d: as_truth_table(f) for d, f in code.decoders.items()},
        key=KeyMap(as_truth_table(code.key.function)),
    )


def check_linearity(instance: NetworkInstance, code: NetworkCode, m1: int, m2: int) -> bool:
    """trace(m1 ^ m2) == trace(m1) ^ trace(m2) on every edge, decoder and the key."""
    t1, t2, t12 = (evaluate(instance, code, m) for m in (m1, m2, m1 ^ m2))
    edges_ok = all(t12.edge_messages[e] == t1.edge_messages[e] ^ t2.edge_messages[e] for e in t12.edge_messages)
    decoders_ok = all(
        t12.decoder_outputs[d] == t1.decoder_outputs[d] ^ t2.decoder_outputs[d] for d in t12.decoder_outputs
    )
    return edges_ok and decoders_ok and t12.key_value == t1.key_value ^ t2.key_value


def all_assignments(layout: CodeLayout) -> np.ndarray:
    return np.arange(1 << layout.total_bits, dtype=np.int64)


def induced_table(inputs: np.ndarray, outputs: np.ndarray, in_bits: int, out_bits: int) -> TruthTable:
    """
    Table sending each observed input to the output of its first occurrence.

    Inputs never observed map to 0. When `outputs` is a function of `inputs`
    this is the unique decoder consistent with them.
    """
    table = np.zeros(1 << in_bits, dtype=np.int64)
    seen, first = np.unique(inputs, return_index=True)
    table[seen] = outputs[first]
    return TruthTable(in_bits, out_bits, table)


def with_induced_decoders(
    instance: NetworkInstance, code: NetworkCode, enum_cap: Optional[int] = None
) -> NetworkCode:
    """Replace every decoder by the table induced from the key over all assignments."""
    layout = build_layout(instance, code.blocklength, code.source_bits)
    _enforce_cap(layout.total_bits, enum_cap, "inducing decoders")
    placeholders = {
        d: TruthTable.constant(layout.input_width(d), code.key_bits) for d in instance.terminals
    }
    draft = code.with_changes(decoders=placeholders)
    block = evaluate_block(instance, draft, all_assignments(layout))
    decoders = {
        d: induced_table(block.node_input(d), block.key, layout.input_width(d), code.key_bits)
        for d in instance.terminals
    }
    return code.with_changes(decoders=decoders)
