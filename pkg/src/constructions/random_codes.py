# Seeded generators of small random instances and codes for property suites
from typing import List, Tuple

import numpy as np

from ..coding import Coord, Gf2Matrix, KeyMap, NetworkCode, TruthTable, with_induced_decoders
from ..model import EavesdropSet, NetworkInstance, SourceDecl, SourceRole, make_edge

RANDOM_FAMILY = "random"


def random_balanced_table(rng: np.random.Generator, in_bits: int, out_bits: int) -> TruthTable:
    """A uniformly chosen map with exactly 2^(in-out) preimages per output."""
    perm = rng.permutation(1 << in_bits).astype(np.int64)
    return TruthTable(in_bits, out_bits, perm >> (in_bits - out_bits))


def random_full_rank(rng: np.random.Generator, rows: int, cols: int) -> Gf2Matrix:
    while True:
        candidate = Gf2Matrix(rng.integers(0, 2, size=(rows, cols)))
        if candidate.rank() == min(rows, cols):
            return candidate


def random_single_source_code(
    rng: np.random.Generator, max_bits: int = 5
) -> Tuple[NetworkInstance, NetworkCode]:
    """
    s feeds terminal d through relay v (l bits) and through tap w (1-2 bits).

    The first hop is a bijection half of the time, so decoding holds about
    half of the time; the tap is arbitrary, so secrecy holds only sometimes.
    """
    ell = int(rng.integers(2, max_bits + 1))
    k = int(rng.integers(1, ell + 1))
    tap = int(rng.integers(1, 3))
    edges = (
        make_edge("s", "v", ell),
        make_edge("v", "d", ell),
        make_edge("s", "w", tap),
        make_edge("w", "d", tap),
    )
    eavesdrop = [EavesdropSet.of(["s>w"])]
    if rng.random() < 0.5:
        eavesdrop.append(EavesdropSet.of(["v>d"]))
    instance = NetworkInstance(
        nodes=("s", "v", "w", "d"),
        edges=edges,
        sources=(SourceDecl("s", SourceRole.BOTH),),
        terminals=("d",),
        eavesdrop_sets=tuple(eavesdrop),
        family=RANDOM_FAMILY,
        params={"generator": "single_source"},
    )
    size = 1 << ell
    if rng.random() < 0.5:
        first_hop = rng.permutation(size)
    else:
        first_hop = rng.integers(0, size, size=size)
    code = NetworkCode(
        blocklength=1,
        source_bits={"s": ell},
        edge_encoders={
            "s>v": TruthTable(ell, ell, first_hop),
            "v>d": TruthTable(ell, ell, np.arange(size)),
            "s>w": TruthTable(ell, tap, rng.integers(0, 1 << tap, size=size)),
            "w>d": TruthTable(tap, tap, np.arange(1 << tap)),
        },
        decoders={"d": TruthTable.constant(ell + tap, k)},
        key=KeyMap(random_balanced_table(rng, ell, k)),
    )
    return instance, with_induced_decoders(instance, code)


def random_linear_key_code(
    rng: np.random.Generator, max_sources: int = 3, max_bits: int = 3, max_terminals: int = 2
) -> Tuple[NetworkInstance, NetworkCode]:
    """
    B = {} linear key code: each s_i mixes its bits through an invertible P_i
    into relay v_i, every relay forwards to every terminal, and terminals
    apply A * blockdiag(P_i^-1) for a random full-row-rank key matrix A.
    """
    count = int(rng.integers(1, max_sources + 1))
    bits = [int(rng.integers(1, max_bits + 1)) for _ in range(count)]
    terminals = [f"d{j}" for j in range(1, int(rng.integers(1, max_terminals + 1)) + 1)]
    sources = [f"s{i}" for i in range(1, count + 1)]
    relays = [f"v{i}" for i in range(1, count + 1)]

    edges = [make_edge(s, v, b) for s, v, b in zip(sources, relays, bits)]
    edges += [make_edge(v, d, b) for d in terminals for v, b in zip(relays, bits)]
    instance = NetworkInstance(
        nodes=tuple(sources + relays + terminals),
        edges=tuple(edges),
        sources=tuple(SourceDecl(s, SourceRole.BOTH) for s in sources),
        terminals=tuple(terminals),
        family=RANDOM_FAMILY,
        params={"generator": "linear_key"},
    )

    mixers = [random_full_rank(rng, b, b) for b in bits]
    ell = sum(bits)
    k = int(rng.integers(1, ell + 1))
    key = random_full_rank(rng, k, ell)
    decoder = key @ Gf2Matrix.block_diagonal(p.inverse() for p in mixers)

    encoders = {f"{s}>{v}": p for s, v, p in zip(sources, relays, mixers)}
    encoders.update({f"{v}>{d}": Gf2Matrix.identity(b) for d in terminals for v, b in zip(relays, bits)})
    code = NetworkCode(
        blocklength=1,
        source_bits=dict(zip(sources, bits)),
        edge_encoders=encoders,
        decoders={d: decoder for d in terminals},
        key=KeyMap(key),
    )
    return instance, code


def random_secure_code(
    rng: np.random.Generator, max_key_bits: int = 3, max_extra_bits: int = 1
) -> Tuple[NetworkInstance, NetworkCode, List[Coord]]:
    """
    One-time pad over a triangle: random source z sends P*z to message source s
    and to d; s sends its k chosen message bits xor P*z to d. Each single edge
    is independent of the message.
    """
    k = int(rng.integers(1, max_key_bits + 1))
    ell_s = k + int(rng.integers(0, max_extra_bits + 1))
    chosen = sorted(int(c) for c in rng.choice(ell_s, size=k, replace=False))
    coords = [("s", c) for c in chosen]

    edges = (make_edge("z", "s", k), make_edge("z", "d", k), make_edge("s", "d", k))
    instance = NetworkInstance(
        nodes=("s", "z", "d"),
        edges=edges,
        sources=(SourceDecl("s", SourceRole.MESSAGE), SourceDecl("z", SourceRole.RANDOM)),
        terminals=("d",),
        eavesdrop_sets=tuple(EavesdropSet.of([e.id]) for e in edges),
        family=RANDOM_FAMILY,
        params={"generator": "secure"},
    )

    pad = random_full_rank(rng, k, k)
    select = np.zeros((k, ell_s), dtype=np.uint8)
    select[np.arange(k), chosen] = 1
    selection = Gf2Matrix(select)
    code = NetworkCode(
        blocklength=1,
        source_bits={"s": ell_s, "z": k},
        edge_encoders={
            "z>s": pad,
            "z>d": pad,
            "s>d": Gf2Matrix.identity(k).hstack(selection),
        },
        decoders={"d": Gf2Matrix.identity(k).hstack(Gf2Matrix.identity(k))},
        key=KeyMap(selection.hstack(Gf2Matrix.zeros(k, k))),
        message_coords=tuple(coords),
    )
    return instance, code, coords
