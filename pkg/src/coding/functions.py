# Concrete bit functions: truth tables, and the edge / key function unions
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..errors import ErrorCode, KeycastError
from .gf2 import Gf2Matrix


class TruthTable:
    """A function {0,1}^in_bits -> {0,1}^out_bits stored as 2^in_bits packed outputs."""

    __slots__ = ("in_bits", "out_bits", "table")

    def __init__(self, in_bits: int, out_bits: int, table: Sequence[int]):
        if in_bits < 0 or out_bits < 0:
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, "truth table widths must be nonnegative")
        array = np.asarray(table, dtype=np.int64).reshape(-1)
        if array.shape[0] != 1 << in_bits:
            raise KeycastError(
                ErrorCode.WIDTH_MISMATCH,
                f"truth table over {in_bits} input bits needs {1 << in_bits} entries, got {array.shape[0]}",
            )
        if array.size and (array.min() < 0 or array.max() >= 1 << out_bits):
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"truth table entry does not fit in {out_bits} bits")
        array = np.ascontiguousarray(array)
        array.setflags(write=False)
        self.in_bits = int(in_bits)
        self.out_bits = int(out_bits)
        self.table = array

    @classmethod
    def constant(cls, in_bits: int, out_bits: int, value: int = 0) -> "TruthTable":
        return cls(in_bits, out_bits, np.full(1 << in_bits, value, dtype=np.int64))

    @classmethod
    def projection(cls, in_bits: int, positions: Sequence[int]) -> "TruthTable":
        """Output the input bits at `positions` (MSB-first indices), in that order."""
        inputs = np.arange(1 << in_bits, dtype=np.int64)
        out = np.zeros_like(inputs)
        for pos in positions:
            out = (out << 1) | ((inputs >> (in_bits - 1 - pos)) & 1)
        return cls(in_bits, len(positions), out)

    def apply_block(self, values: np.ndarray) -> np.ndarray:
        return self.table[np.asarray(values, dtype=np.int64)]

    def apply(self, value: int) -> int:
        return int(self.table[value])

    def to_table(self) -> np.ndarray:
        return self.table

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruthTable)
            and (self.in_bits, self.out_bits) == (other.in_bits, other.out_bits)
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self) -> int:
        return hash((self.in_bits, self.out_bits, self.table.tobytes()))

    def __repr__(self) -> str:
        preview = ", ".join(str(v) for v in self.table[:8].tolist())
        if self.table.shape[0] > 8:
            preview += ", ..."
        return f"TruthTable({self.in_bits}->{self.out_bits}, [{preview}])"


EdgeFunction = Union[TruthTable, Gf2Matrix]


def as_truth_table(function: EdgeFunction) -> TruthTable:
    if isinstance(function, TruthTable):
        return function
    return TruthTable(function.in_bits, function.out_bits, function.to_table())


def precompose(function: EdgeFunction, inner: np.ndarray) -> TruthTable:
    """x -> function(inner[x]) where inner is a table over the same input width."""
    return TruthTable(function.in_bits, function.out_bits, function.apply_block(inner))


def same_function(a: EdgeFunction, b: EdgeFunction) -> bool:
    """Pointwise equality regardless of representation."""
    if (a.in_bits, a.out_bits) != (b.in_bits, b.out_bits):
        return False
    return bool(np.array_equal(a.to_table(), b.to_table()))


@dataclass(frozen=True)
class KeyMap:
    """The global key function f: m -> K over all l source bits."""

    function: EdgeFunction

    @property
    def key_bits(self) -> int:
        return self.function.out_bits

    @property
    def in_bits(self) -> int:
        return self.function.in_bits

    @property
    def is_linear(self) -> bool:
        return isinstance(self.function, Gf2Matrix)

    def apply_block(self, assignments: np.ndarray) -> np.ndarray:
        return self.function.apply_block(assignments)

    def apply(self, assignment: int) -> int:
        return self.function.apply(assignment)

    def to_table(self) -> np.ndarray:
        return self.function.to_table()

    def as_truth_table(self) -> "KeyMap":
        return KeyMap(as_truth_table(self.function))
