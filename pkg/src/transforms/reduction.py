# Secure multicast with one message source, as key dissemination with an extra terminal
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..analysis import format_rate, is_determined, joint_counts, key_var, parse_rate, source_var
from ..coding import Coord, Gf2Matrix, KeyMap, NetworkCode, TruthTable, check_code, edge_width
from ..errors import ErrorCode, KeycastError
from ..model import Edge, NetworkInstance, SourceDecl, SourceRole
from .preencoding import precompose_at_source, preencoding_permutation

logger = logging.getLogger(__name__)

REDUCED_FAMILY = "reduced"
KEY_TERMINAL = "d_key"


def _key_terminal_name(instance: NetworkInstance) -> str:
    name, suffix = KEY_TERMINAL, 1
    while name in instance.nodes:
        name = f"{KEY_TERMINAL}_{suffix}"
        suffix += 1
    return name


def reduce_secure_to_key(instance: NetworkInstance, rate) -> NetworkInstance:
    """
    Add terminal d_key fed by the message source s over a new edge of capacity R;
    every source becomes a plain key source and the eavesdrop sets stay as they are.
    """
    rate = parse_rate(rate)
    if rate <= 0:
        raise KeycastError(ErrorCode.BAD_RATE, f"reduction needs R > 0, got {format_rate(rate)}")
    messages = instance.message_sources
    if len(messages) != 1:
        raise KeycastError(ErrorCode.MULTI_MESSAGE_SOURCE,
                           f"reduction needs exactly one message source, found {len(messages)}")
    source = messages[0]
    d_key = _key_terminal_name(instance)
    key_edge = Edge(f"{source}>{d_key}", source, d_key, Fraction(rate))
    return NetworkInstance(
        nodes=instance.nodes + (d_key,),
        edges=instance.edges + (key_edge,),
        sources=tuple(SourceDecl(s.node, SourceRole.BOTH) for s in instance.sources),
        terminals=instance.terminals + (d_key,),
        eavesdrop_sets=instance.eavesdrop_sets,
        family=REDUCED_FAMILY,
        params={
            "d_key": d_key,
            "key_edge": key_edge.id,
            "message_source": source,
            "rate": format_rate(rate),
            "roles": {s.node: s.role.value for s in instance.sources},
            "base_family": instance.family,
            "base_params": dict(instance.params),
        },
    )


def lift_secure_code(
    instance: NetworkInstance,
    code: NetworkCode,
    rate,
    message_coords: Optional[Sequence[Coord]] = None,
) -> Tuple[NetworkInstance, NetworkCode]:
    """Carry the key bits on the new edge (zero-padded) and let d_key read them back."""
    reduced = reduce_secure_to_key(instance, rate)
    params = reduced.params
    source, d_key, key_edge = params["message_source"], params["d_key"], params["key_edge"]
    layout = check_code(instance, code)

    coords = message_coords if message_coords is not None else code.message_coords
    if coords is None:
        raise KeycastError(ErrorCode.BAD_COORDS, "message coordinates are required to lift a secure code")
    coords = [(str(s), int(j)) for s, j in coords]
    if len(set(coords)) != len(coords):
        raise KeycastError(ErrorCode.BAD_COORDS, "coordinates must be duplicate-free")
    for node, j in coords:
        if node != source or not layout.valid_coord((node, j)):
            raise KeycastError(ErrorCode.BAD_COORDS, f"({node}, {j}) is not a bit of message source '{source}'")

    width = edge_width(reduced, key_edge, code.blocklength)
    k = code.key_bits
    if k > width:
        raise KeycastError(ErrorCode.CAPACITY_EXCEEDED,
                           f"{k} key bits do not fit the {width}-bit edge '{key_edge}'", needed=k, width=width)
    if len(coords) != k:
        raise KeycastError(ErrorCode.BAD_COORDS, f"{len(coords)} coordinates for a {k}-bit key")

    in_width = layout.input_width(source)
    own = layout.source_bits[source]
    forward = np.zeros((width, in_width), dtype=np.uint8)
    for row, (_, j) in enumerate(coords):
        forward[row, in_width - own + j] = 1
    readback = Gf2Matrix.identity(k).hstack(Gf2Matrix.zeros(k, width - k))

    lifted = code.with_changes(
        edge_encoders={**code.edge_encoders, key_edge: Gf2Matrix(forward)},
        decoders={**code.decoders, d_key: readback},
        message_coords=tuple(coords),
    )
    logger.info("✓ Secure code lifted onto '%s' (%d of %d bits used)", key_edge, k, width)
    return reduced, lifted


def restrict_key_code_to_secure(
    reduced: NetworkInstance, code: NetworkCode
) -> Tuple[NetworkInstance, NetworkCode, List[Coord]]:
    """
    Undo the reduction for a key code whose key depends only on s: pre-encode at
    s so the key becomes s's first k bits, then drop d_key and its edge.
    """
    if reduced.family != REDUCED_FAMILY or "d_key" not in reduced.params:
        raise KeycastError(ErrorCode.NOT_REDUCED_INSTANCE, "instance was not produced by reduce_secure_to_key")
    params = reduced.params
    source, d_key, key_edge = params["message_source"], params["d_key"], params["key_edge"]
    layout = check_code(reduced, code)

    table = joint_counts(reduced, code, [source_var(layout, source), key_var(code)])
    if not is_determined(table, [source_var(layout, source)], [key_var(code)]):
        raise KeycastError(ErrorCode.KEY_NOT_SOURCE_FUNCTION,
                           f"the key is not a function of the bits generated at '{source}'")

    # f_s: the key with every other source held at zero.
    own = layout.source_bits[source]
    shift = layout.total_bits - layout.source_offset[source] - own
    f_s = TruthTable(own, code.key_bits, code.key.apply_block(np.arange(1 << own, dtype=np.int64) << shift))
    perm = preencoding_permutation(f_s)
    k = code.key_bits

    original = NetworkInstance(
        nodes=tuple(n for n in reduced.nodes if n != d_key),
        edges=tuple(e for e in reduced.edges if e.id != key_edge),
        sources=tuple(SourceDecl(s.node, SourceRole(params["roles"][s.node])) for s in reduced.sources),
        terminals=tuple(d for d in reduced.terminals if d != d_key),
        eavesdrop_sets=reduced.eavesdrop_sets,
        family=params.get("base_family"),
        params=dict(params.get("base_params") or {}),
    )
    trimmed = code.with_changes(
        edge_encoders={e: f for e, f in code.edge_encoders.items() if e != key_edge},
        decoders={d: f for d, f in code.decoders.items() if d != d_key},
    )
    secure = precompose_at_source(original, trimmed, source, perm)

    offset = layout.source_offset[source]
    projection = np.zeros((k, layout.total_bits), dtype=np.uint8)
    projection[np.arange(k), offset + np.arange(k)] = 1
    coords = [(source, j) for j in range(k)]
    secure = secure.with_changes(key=KeyMap(Gf2Matrix(projection)), message_coords=tuple(coords))
    logger.info("✓ Key code restricted to a secure code with message bits %s[0..%d)", source, k)
    return original, secure, coords
