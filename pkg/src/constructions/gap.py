# The gap family: a combination-style network where two-stage decoding loses rate
from enum import Enum
from fractions import Fraction
from typing import Dict, List

from ..coding import Gf2Matrix, KeyMap, NetworkCode
from ..errors import ErrorCode, KeycastError
from ..model import EavesdropSet, NetworkInstance, SourceDecl, SourceRole, make_edge, min_cut

GAP_FAMILY = "gap"


class EavesdropMode(str, Enum):
    EDGE_SETS = "EDGE_SETS"  # one set per middle node: its incoming edges
    NODE_ALL = "NODE_ALL"    # additionally one set per source node


def gap_instance(alpha: int, mode: EavesdropMode = EavesdropMode.EDGE_SETS) -> NetworkInstance:
    """
    r = alpha + 1 sources s_i, middle layers u_i (fed by s_i) and ubar_i (fed by
    every s_j with j != i), and terminals d_i reading u_i and ubar_i. Unit capacities.
    """
    if not isinstance(alpha, int) or alpha < 1:
        raise KeycastError(ErrorCode.BAD_ALPHA, f"alpha must be an integer >= 1, got {alpha!r}")
    mode = EavesdropMode(mode)
    r = alpha + 1
    idx = range(1, r + 1)
    sources = [f"s{i}" for i in idx]
    u = [f"u{i}" for i in idx]
    ubar = [f"ubar{i}" for i in idx]
    terminals = [f"d{i}" for i in idx]

    edges = [make_edge(f"s{i}", f"u{i}") for i in idx]
    edges += [make_edge(f"s{j}", f"ubar{i}") for i in idx for j in idx if j != i]
    edges += [make_edge(f"u{i}", f"d{i}") for i in idx]
    edges += [make_edge(f"ubar{i}", f"d{i}") for i in idx]

    eavesdrop = [EavesdropSet.of(e.id for e in edges if e.head == v) for v in u + ubar]
    if mode is EavesdropMode.NODE_ALL:
        eavesdrop += [EavesdropSet.of(observed_sources=[s]) for s in sources]

    return NetworkInstance(
        nodes=tuple(sources + u + ubar + terminals),
        edges=tuple(edges),
        sources=tuple(SourceDecl(s, SourceRole.BOTH) for s in sources),
        terminals=tuple(terminals),
        eavesdrop_sets=tuple(eavesdrop),
        family=GAP_FAMILY,
        params={"alpha": alpha, "r": r, "mode": mode.value},
    )


def gap_r(instance: NetworkInstance) -> int:
    if instance.family != GAP_FAMILY or "r" not in instance.params:
        raise KeycastError(ErrorCode.NOT_GAP_INSTANCE, "instance was not built by gap_instance")
    return int(instance.params["r"])


def _row(bits: List[int]) -> Gf2Matrix:
    return Gf2Matrix([bits])


def sum_code(instance: NetworkInstance) -> NetworkCode:
    """n = 1: every node forwards the XOR of what it hears; the key is the parity of all sources."""
    r = gap_r(instance)
    encoders = {}
    for edge in instance.edges:
        if edge.tail.startswith("ubar"):
            encoders[edge.id] = _row([1] * (r - 1))
        else:
            encoders[edge.id] = Gf2Matrix.identity(1)
    return NetworkCode(
        blocklength=1,
        source_bits={s: 1 for s in instance.source_nodes},
        edge_encoders=encoders,
        decoders={d: _row([1, 1]) for d in instance.terminals},
        key=KeyMap(_row([1] * r)),
    )


def two_stage_gap_code(instance: NetworkInstance) -> NetworkCode:
    """
    n = 2, one key bit. Sources repeat their bit on both uses, u_i forwards,
    ubar_i forwards one copy of each incoming bit. Each terminal then holds
    every source bit and outputs their parity.
    """
    r = gap_r(instance)
    if r > 3:
        raise KeycastError(ErrorCode.UNSUPPORTED_R,
                           f"ubar nodes must relay {r - 1} bits over a 2-bit edge; only r <= 3 is supported",
                           r=r)
    encoders = {}
    for edge in instance.edges:
        if edge.tail.startswith("s"):
            encoders[edge.id] = Gf2Matrix([[1], [1]])
        elif edge.tail.startswith("ubar"):
            # input: r-1 incoming 2-bit messages; keep the first bit of each
            rows = [[0] * (2 * (r - 1)) for _ in range(2)]
            for slot in range(r - 1):
                rows[slot][2 * slot] = 1
            encoders[edge.id] = Gf2Matrix(rows)
        else:
            encoders[edge.id] = Gf2Matrix.identity(2)
    decoder = [1, 0, 1, 1] if r == 3 else [1, 0, 1, 0]
    return NetworkCode(
        blocklength=2,
        source_bits={s: 1 for s in instance.source_nodes},
        edge_encoders=encoders,
        decoders={d: _row(decoder) for d in instance.terminals},
        key=KeyMap(_row([1] * r)),
    )


def two_stage_upper_bound(alpha: int) -> Fraction:
    """1/(r-1): the two-stage key rate cannot exceed this on gap_instance(alpha)."""
    if alpha < 1:
        raise KeycastError(ErrorCode.BAD_ALPHA, f"alpha must be >= 1, got {alpha}")
    return Fraction(1, alpha)


def gap_cut_bounds(instance: NetworkInstance) -> Dict[str, Fraction]:
    """min_cut({s_j : j != i}, d_i) for every terminal d_i."""
    r = gap_r(instance)
    bounds = {}
    for i in range(1, r + 1):
        others = [f"s{j}" for j in range(1, r + 1) if j != i]
        bounds[f"d{i}"] = min_cut(instance, others, f"d{i}")
    return bounds
