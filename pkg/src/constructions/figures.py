# Small fixed networks: the two-source XOR example and a single-source relay
from typing import Tuple

from ..coding import Gf2Matrix, KeyMap, NetworkCode
from ..model import EavesdropSet, NetworkInstance, SourceDecl, SourceRole, make_edge

FIG1B_FAMILY = "fig1b"
RELAY_FAMILY = "relay"


def fig1b_instance(observe_sources: bool = True) -> NetworkInstance:
    """s1 and s2 each reach terminal d over one unit edge; the eavesdropper may sit on either source."""
    eavesdrop = (
        (EavesdropSet.of(observed_sources=["s1"]), EavesdropSet.of(observed_sources=["s2"]))
        if observe_sources else ()
    )
    return NetworkInstance(
        nodes=("s1", "s2", "d"),
        edges=(make_edge("s1", "d"), make_edge("s2", "d")),
        sources=(SourceDecl("s1", SourceRole.BOTH), SourceDecl("s2", SourceRole.BOTH)),
        terminals=("d",),
        eavesdrop_sets=eavesdrop,
        family=FIG1B_FAMILY,
        params={"observe_sources": observe_sources},
    )


def fig1b_code(key: str = "xor") -> NetworkCode:
    """Both sources forward their bit; the key is b1 xor b2, or b1 alone with key='b1'."""
    key_row = {"xor": [1, 1], "b1": [1, 0]}[key]
    return NetworkCode(
        blocklength=1,
        source_bits={"s1": 1, "s2": 1},
        edge_encoders={"s1>d": Gf2Matrix.identity(1), "s2>d": Gf2Matrix.identity(1)},
        decoders={"d": Gf2Matrix([key_row])},
        key=KeyMap(Gf2Matrix([key_row])),
    )


def fig1b_instance_and_code() -> Tuple[NetworkInstance, NetworkCode]:
    return fig1b_instance(), fig1b_code()


def relay_instance(capacity: int = 1, eavesdrop_first_hop: bool = False) -> NetworkInstance:
    """Single source s, relay v, terminal d on the path s -> v -> d."""
    first, second = make_edge("s", "v", capacity), make_edge("v", "d", capacity)
    return NetworkInstance(
        nodes=("s", "v", "d"),
        edges=(first, second),
        sources=(SourceDecl("s", SourceRole.BOTH),),
        terminals=("d",),
        eavesdrop_sets=(EavesdropSet.of([first.id]),) if eavesdrop_first_hop else (),
        family=RELAY_FAMILY,
        params={"capacity": capacity},
    )


def relay_code(bits: int = 2) -> NetworkCode:
    """Over relay_instance(1): s sends the parity of its `bits` bits, which is also the key."""
    parity = Gf2Matrix([[1] * bits])
    return NetworkCode(
        blocklength=1,
        source_bits={"s": bits},
        edge_encoders={"s>v": parity, "v>d": Gf2Matrix.identity(1)},
        decoders={"d": Gf2Matrix.identity(1)},
        key=KeyMap(parity),
    )
