# Dense GF(2) matrices backed by numpy, with linear algebra from galois
from typing import Iterable, List, Optional, Sequence

import galois
import numpy as np

from ..errors import ErrorCode, KeycastError

GF2 = galois.GF(2)


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.uint8)
    array.setflags(write=False)
    return array


def bits_to_ints(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a 0/1 array into integers, first column most significant."""
    width = bits.shape[-1]
    if width == 0:
        return np.zeros(bits.shape[:-1], dtype=np.int64)
    weights = np.left_shift(np.int64(1), np.arange(width - 1, -1, -1, dtype=np.int64))
    return bits.astype(np.int64) @ weights


def ints_to_bits(values: np.ndarray, width: int) -> np.ndarray:
    """Unpack integers into a (..., width) 0/1 array, most significant bit first."""
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


class Gf2Matrix:
    """
    A rows x cols bit matrix acting on MSB-first bit vectors.

    Column 0 multiplies the most significant input bit; row 0 produces the
    most significant output bit.
    """

    __slots__ = ("bits",)

    def __init__(self, bits):
        array = np.asarray(bits, dtype=np.uint8)
        if array.ndim != 2:
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"GF(2) matrix must be 2-D, got shape {array.shape}")
        if array.size and array.max() > 1:
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, "GF(2) matrix entries must be 0 or 1")
        self.bits = _readonly(array)

    # Construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, size: int) -> "Gf2Matrix":
        return cls(np.eye(size, dtype=np.uint8))

    @classmethod
    def from_bitstrings(cls, rows: Sequence[str], cols: Optional[int] = None) -> "Gf2Matrix":
        """Rows given as '0'/'1' strings; `cols` is needed only when there are no rows."""
        if not rows:
            return cls.zeros(0, cols or 0)
        widths = {len(r) for r in rows}
        if len(widths) != 1 or (cols is not None and widths != {cols}):
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, "bitstring rows have inconsistent widths")
        if any(ch not in "01" for r in rows for ch in r):
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, "bitstrings may contain only '0' and '1'")
        return cls(np.array([[int(ch) for ch in r] for r in rows], dtype=np.uint8).reshape(len(rows), -1))

    @classmethod
    def block_diagonal(cls, blocks: Iterable["Gf2Matrix"]) -> "Gf2Matrix":
        blocks = list(blocks)
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = np.zeros((rows, cols), dtype=np.uint8)
        r = c = 0
        for block in blocks:
            out[r:r + block.rows, c:c + block.cols] = block.bits
            r += block.rows
            c += block.cols
        return cls(out)

    # Shape

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def in_bits(self) -> int:
        return self.cols

    @property
    def out_bits(self) -> int:
        return self.rows

    def to_bitstrings(self) -> List[str]:
        return ["".join(str(int(b)) for b in row) for row in self.bits]

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf2Matrix) and self.bits.shape == other.bits.shape and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.to_bitstrings()!r})"

    # Linear algebra

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return int(np.linalg.matrix_rank(GF2(self.bits)))

    def solve(self, rhs) -> np.ndarray:
        """x with self @ x = rhs for square invertible self; rhs is a bit vector or a matrix of columns."""
        if self.rows != self.cols:
            raise KeycastError(ErrorCode.RANK_DEFICIENT, f"cannot solve with a {self.rows}x{self.cols} matrix")
        b = np.asarray(rhs, dtype=np.uint8)
        if b.shape[:1] != (self.rows,):
            raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"right-hand side has {b.shape[:1]} rows, expected {self.rows}")
        if self.rows == 0:
            return b.copy()
        try:
            x = np.linalg.solve(GF2(self.bits), GF2(b))
        except np.linalg.LinAlgError as exc:
            raise KeycastError(ErrorCode.RANK_DEFICIENT, "matrix is singular over GF(2)") from exc
        return np.asarray(x, dtype=np.uint8)

    def inverse(self) -> "Gf2Matrix":
        if self.rows != self.cols:
            raise KeycastError(ErrorCode.RANK_DEFICIENT, f"cannot invert a {self.rows}x{self.cols} matrix")
        return Gf2Matrix(self.solve(np.eye(self.rows, dtype=np.uint8)))

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise KeycastError(ErrorCode.WIDTH_MISMATCH,
                               f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        product = self.bits.astype(np.int64) @ other.bits.astype(np.int64)
        return Gf2Matrix(product % 2)

    # Column surgery

    def with_zero_column(self, index: int) -> "Gf2Matrix":
        bits = self.bits.copy()
        bits[:, index] = 0
        return Gf2Matrix(bits)

    def select_columns(self, indices: Sequence[int]) -> "Gf2Matrix":
        return Gf2Matrix(self.bits[:, list(indices)].reshape(self.rows, len(indices)))

    def delete_columns(self, indices: Iterable[int]) -> "Gf2Matrix":
        drop = set(indices)
        keep = [c for c in range(self.cols) if c not in drop]
        return self.select_columns(keep)

    def nonzero_columns(self) -> List[int]:
        return [int(c) for c in np.flatnonzero(self.bits.any(axis=0))]

    def hstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        return Gf2Matrix(np.hstack([self.bits, other.bits]).reshape(self.rows, self.cols + other.cols))

    # Evaluation

    def row_masks(self) -> np.ndarray:
        """Each row as an integer mask over the MSB-first input."""
        return bits_to_ints(self.bits)

    def apply_block(self, values: np.ndarray) -> np.ndarray:
        """Apply to an array of packed input integers; returns packed outputs."""
        values = np.asarray(values, dtype=np.int64)
        out = np.zeros(values.shape, dtype=np.int64)
        for mask in self.row_masks():
            selected = values & mask
            # fold the word onto its low bit
            shift = 32
            while shift:
                selected = selected ^ (selected >> shift)
                shift //= 2
            parity = selected & 1
            out = (out << 1) | parity
        return out

    def apply(self, value: int) -> int:
        return int(self.apply_block(np.array([value], dtype=np.int64))[0])

    def to_table(self) -> np.ndarray:
        """Outputs on every input 0..2^cols-1."""
        return self.apply_block(np.arange(1 << self.cols, dtype=np.int64))
