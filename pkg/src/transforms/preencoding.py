# Pre-encoding permutations: make a uniform key read off the first k source bits
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Union

import numpy as np

from ..coding import CodeLayout, EdgeFunction, KeyMap, NetworkCode, build_layout, precompose
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection on {0, ..., 2^bits - 1}."""

    bits: int
    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        size = 1 << self.bits
        if table.shape != (size,) or not np.array_equal(np.sort(table), np.arange(size)):
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"table is not a permutation of 0..{size - 1}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def identity(cls, bits: int) -> "Permutation":
        return cls(bits, np.arange(1 << bits))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(1 << self.bits)))

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.table.shape[0])
        return Permutation(self.bits, inv)

    def apply_block(self, values: np.ndarray) -> np.ndarray:
        return self.table[values]

    def to_list(self) -> List[int]:
        return [int(v) for v in self.table]


def preencoding_permutation(f: Union[KeyMap, EdgeFunction], k: Optional[int] = None) -> Permutation:
    """
    Canonical pi with f(pi(m)) = m >> (l - k).

    Block p of inputs (those with k-bit prefix p) is sent, in suffix order, to
    the preimages of p listed ascending; this is a stable argsort of f's table.
    """
    if isinstance(f, KeyMap):
        f = f.function
    table = np.asarray(f.to_table(), dtype=np.int64)
    ell = f.in_bits
    k = f.out_bits if k is None else k
    if k != f.out_bits:
        raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"key has {f.out_bits} bits, not {k}")
    if k > ell:
        raise KeycastError(ErrorCode.NOT_UNIFORM, f"a {k}-bit key cannot be uniform over {ell} bits")
    counts = np.bincount(table, minlength=1 << k)
    expected = 1 << (ell - k)
    if np.any(counts != expected):
        value = int(np.flatnonzero(counts != expected)[0])
        raise KeycastError(ErrorCode.NOT_UNIFORM,
                           f"key value {value} has {int(counts[value])} preimages, expected {expected}",
                           key_value=value)
    return Permutation(ell, np.argsort(table, kind="stable"))


def _remap_low_bits(width: int, low_bits: int, perm: Permutation) -> np.ndarray:
    """Inputs 0..2^width-1 with their lowest `low_bits` bits sent through perm."""
    inputs = np.arange(1 << width, dtype=np.int64)
    mask = (1 << low_bits) - 1
    return (inputs & ~mask) | perm.table[inputs & mask]


def _remap_source_segment(layout: CodeLayout, source: str, perm: Permutation) -> np.ndarray:
    """Assignments 0..2^l-1 with `source`'s segment sent through perm."""
    ell = layout.total_bits
    width = layout.source_bits[source]
    shift = ell - layout.source_offset[source] - width
    mask = ((1 << width) - 1) << shift
    m = np.arange(1 << ell, dtype=np.int64)
    return (m & ~mask) | (perm.table[(m & mask) >> shift] << shift)


def precompose_at_source(
    instance: NetworkInstance, code: NetworkCode, source: str, perm: Permutation
) -> NetworkCode:
    """
    The code that first applies perm to `source`'s bits: every function that
    reads them (its out-edge encoders, its decoder if it is a terminal, and the
    key) is composed with perm.
    """
    layout = build_layout(instance, code.blocklength, code.source_bits)
    if perm.bits != layout.source_bits[source]:
        raise KeycastError(ErrorCode.WIDTH_MISMATCH,
                           f"permutation acts on {perm.bits} bits but '{source}' has {layout.source_bits[source]}")
    if perm.is_identity:
        return code

    width = layout.input_width(source)
    local = _remap_low_bits(width, perm.bits, perm)
    encoders: Dict[str, EdgeFunction] = dict(code.edge_encoders)
    for edge in instance.out_edges(source):
        encoders[edge.id] = precompose(encoders[edge.id], local)
    decoders: Dict[str, EdgeFunction] = dict(code.decoders)
    if source in decoders:
        decoders[source] = precompose(decoders[source], local)
    key = KeyMap(precompose(code.key.function, _remap_source_segment(layout, source, perm)))
    return code.with_changes(edge_encoders=encoders, decoders=decoders, key=key)


def apply_preencoding(instance: NetworkInstance, code: NetworkCode, perm: Permutation) -> NetworkCode:
    """Single-source pre-encoding: the new code's trace on m is the old trace on pi(m)."""
    if len(instance.sources) != 1:
        raise KeycastError(ErrorCode.MULTI_SOURCE,
                           f"pre-encoding needs exactly one source, instance has {len(instance.sources)}")
    source = instance.source_nodes[0]
    updated = precompose_at_source(instance, code, source, perm)
    logger.info("✓ Pre-encoding applied at '%s' over %d bits", source, perm.bits)
    return updated
