# Linear key codes without eavesdroppers become secure multicast codes
import logging
from typing import Dict, List, Tuple

import numpy as np

from ..coding import Coord, Gf2Matrix, KeyMap, NetworkCode, check_code, is_linear
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance

logger = logging.getLogger(__name__)


def zero_redundant_columns(matrix: Gf2Matrix) -> Tuple[Gf2Matrix, List[int]]:
    """
    Zero columns one at a time, always the highest-index nonzero column whose
    removal keeps the rank, until the surviving columns are independent.
    """
    rank = matrix.rank()
    current = matrix
    while True:
        for column in reversed(current.nonzero_columns()):
            candidate = current.with_zero_column(column)
            if candidate.rank() == rank:
                current = candidate
                break
        else:
            return current, current.nonzero_columns()


def linear_key_to_secure(instance: NetworkInstance, code: NetworkCode) -> Tuple[NetworkCode, List[Coord]]:
    """
    Freeze every source bit outside a basis of the key's columns and rewrite
    the decoders so each terminal outputs the surviving bits themselves.

    Returns the new code and its message coordinates (sorted, in the new bit
    numbering). Frozen bits are removed from their source altogether.
    """
    if instance.eavesdrop_sets:
        raise KeycastError(ErrorCode.NONZERO_B, "this transform needs an instance without eavesdroppers")
    if not is_linear(code):
        raise KeycastError(ErrorCode.NOT_LINEAR, "every encoder, decoder and the key must be GF(2) matrices")
    layout = check_code(instance, code)
    key: Gf2Matrix = code.key.function
    k = key.rows
    if key.rank() != k:
        raise KeycastError(ErrorCode.RANK_DEFICIENT, f"key matrix has rank {key.rank()} < {k}; key is not uniform")

    _, kept = zero_redundant_columns(key)
    kept_set = set(kept)

    # Per-source local indices of frozen bits, and the new numbering of kept ones.
    frozen: Dict[str, List[int]] = {}
    renumber: Dict[int, Coord] = {}
    for source in layout.sources:
        offset = layout.source_offset[source]
        local_kept = [j for j in range(layout.source_bits[source]) if offset + j in kept_set]
        frozen[source] = [j for j in range(layout.source_bits[source]) if offset + j not in kept_set]
        for new_j, j in enumerate(local_kept):
            renumber[offset + j] = (source, new_j)

    def drop_own_bits(function: Gf2Matrix, node: str) -> Gf2Matrix:
        width = layout.input_width(node)
        own = layout.source_bits[node]
        return function.delete_columns(width - own + j for j in frozen[node])

    encoders = dict(code.edge_encoders)
    decoders = dict(code.decoders)
    for source in layout.sources:
        if not frozen[source]:
            continue
        for edge in instance.out_edges(source):
            encoders[edge.id] = drop_own_bits(encoders[edge.id], source)
        if source in decoders:
            decoders[source] = drop_own_bits(decoders[source], source)

    # New bit numbering: kept columns in global order; coords listed sorted.
    coords = sorted(renumber[g] for g in kept)
    position = {renumber[g]: index for index, g in enumerate(kept)}
    selection = np.zeros((k, k), dtype=np.uint8)
    for row, coord in enumerate(coords):
        selection[row, position[coord]] = 1
    new_key = Gf2Matrix(selection)
    # Decoders used to output A_S m'; now they must output selection @ m'.
    correction = new_key @ key.select_columns(kept).inverse()
    decoders = {d: correction @ g for d, g in decoders.items()}

    secure = code.with_changes(
        source_bits={s: layout.source_bits[s] - len(frozen[s]) for s in layout.sources},
        edge_encoders=encoders,
        decoders=decoders,
        key=KeyMap(new_key),
        message_coords=tuple(coords),
    )
    logger.info("✓ Linear key code reduced to %d message bits (%d bits frozen)",
                k, sum(len(v) for v in frozen.values()))
    return secure, coords
