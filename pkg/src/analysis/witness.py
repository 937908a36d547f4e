# Search for a two-stage witness M
import logging
from itertools import combinations
from typing import List, Optional

import numpy as np

from ..coding import Coord, NetworkCode, all_assignments, check_code, evaluate_block
from ..config import get_settings
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance
from .feasibility import check_key_feasibility, check_two_stage_feasibility

logger = logging.getLogger(__name__)


def _determines(given: np.ndarray, target: np.ndarray) -> bool:
    """Whether `target` is a function of `given`, both as packed integer arrays."""
    pairs = np.unique(np.stack([given, target], axis=1), axis=0)
    return len(pairs) == len(np.unique(given))


def find_two_stage_witness(
    instance: NetworkInstance,
    code: NetworkCode,
    rate,
    witness_cap: Optional[int] = None,
) -> Optional[List[Coord]]:
    """
    Smallest M, then lexicographically first by sorted coordinate list, for which
    the code passes the two-stage check; None when no M works.

    A terminal recovers M exactly when it recovers every bit of M, and K stays a
    function of M when M grows, so only bits every terminal recovers are tried
    and the largest such set is tested first.
    """
    cap = get_settings().witness_cap if witness_cap is None else witness_cap
    layout = check_code(instance, code)
    ell = layout.total_bits
    if ell > cap:
        raise KeycastError(ErrorCode.SPACE_LIMIT, f"witness search over l={ell} bits exceeds cap {cap}",
                           bits=ell, cap=cap)

    # Rate, decoding and secrecy do not depend on M.
    if not check_key_feasibility(instance, code, rate, enum_cap=cap).overall:
        return None

    block = evaluate_block(instance, code, all_assignments(layout), layout)
    inputs = [block.node_input(d) for d in instance.terminals]
    recoverable = [
        coord for coord in layout.all_coords()
        if all(_determines(x, block.source_bit(*coord)) for x in inputs)
    ]

    def packed(coords) -> np.ndarray:
        value = np.zeros(block.assignments.shape, dtype=np.int64)
        for coord in coords:
            value = (value << 1) | block.source_bit(*coord)
        return value

    def key_follows(coords) -> bool:
        return _determines(packed(coords), block.key)

    if not key_follows(recoverable):
        return None
    for size in range(len(recoverable) + 1):
        for subset in combinations(recoverable, size):
            if key_follows(subset):
                witness = list(subset)
                report = check_two_stage_feasibility(instance, code, rate, witness, enum_cap=cap)
                if not report.overall:
                    raise RuntimeError(f"witness {witness} failed re-verification: {report.failed()}")
                logger.info("✓ Two-stage witness found with |M| = %d", size)
                return witness
    return None
