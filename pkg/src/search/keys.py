# Candidate keys tried by the rate search
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import List, Sequence, Tuple

import numpy as np

from ..coding import CodeLayout, Coord
from ..errors import ErrorCode, KeycastError


def balanced_count(total_bits: int, key_bits: int) -> int:
    """Number of maps from l bits onto k bits hitting every value equally often."""
    size, per = 1 << total_bits, 1 << (total_bits - key_bits)
    return factorial(size) // factorial(per) ** (1 << key_bits)


@lru_cache(maxsize=64)
def _balanced_tables(total_bits: int, key_bits: int) -> np.ndarray:
    size, values = 1 << total_bits, 1 << key_bits
    remaining = [1 << (total_bits - key_bits)] * values
    table = [0] * size
    rows: List[List[int]] = []

    def fill(index: int) -> None:
        if index == size:
            rows.append(list(table))
            return
        for value in range(values):
            if remaining[value]:
                remaining[value] -= 1
                table[index] = value
                fill(index + 1)
                remaining[value] += 1

    fill(0)
    bank = np.array(rows, dtype=np.int16).reshape(len(rows), size)
    bank.setflags(write=False)
    return bank


def balanced_tables(total_bits: int, key_bits: int, key_budget: int) -> np.ndarray:
    """
    Every uniform k-bit key over l bits as a truth-table row, in lexicographic order.

    ell=3, k=1 gives the C(8, 4) = 70 tables with four zeros and four ones.
    """
    if not 0 <= key_bits <= total_bits:
        raise KeycastError(ErrorCode.WIDTH_MISMATCH, f"no {key_bits}-bit uniform key over {total_bits} bits")
    count = balanced_count(total_bits, key_bits)
    if count > key_budget:
        raise KeycastError(ErrorCode.BUDGET_EXCEEDED,
                           f"{count} uniform {key_bits}-bit keys over {total_bits} bits; key budget is {key_budget}",
                           keys=str(count), budget=key_budget)
    return _balanced_tables(total_bits, key_bits)


def message_coords(layout: CodeLayout, message_sources: Sequence[str]) -> List[Coord]:
    allowed = set(message_sources)
    return [coord for coord in layout.all_coords() if coord[0] in allowed]


def projection_bank(
    layout: CodeLayout, coords: Sequence[Coord], key_bits: int, key_budget: int
) -> Tuple[np.ndarray, List[Tuple[Coord, ...]]]:
    """Projections onto every k-subset of `coords` (sorted), as truth-table rows."""
    count = comb(len(coords), key_bits)
    if count > key_budget:
        raise KeycastError(ErrorCode.BUDGET_EXCEEDED,
                           f"{count} projections of {key_bits} bits; key budget is {key_budget}",
                           keys=str(count), budget=key_budget)
    ell = layout.total_bits
    m = np.arange(1 << ell, dtype=np.int64)
    subsets = list(combinations(sorted(coords), key_bits))
    bank = np.zeros((len(subsets), 1 << ell), dtype=np.int16)
    for row, subset in enumerate(subsets):
        value = np.zeros_like(m)
        for coord in subset:
            value = (value << 1) | ((m >> (ell - 1 - layout.global_bit(coord))) & 1)
        bank[row] = value
    return bank, subsets
