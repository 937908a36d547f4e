# Network codes: GF(2) matrices, truth tables, evaluation
from .gf2 import GF2, Gf2Matrix, bits_to_ints, ints_to_bits
from .functions import EdgeFunction, KeyMap, TruthTable, as_truth_table, precompose, same_function
from .network_code import (
    MAX_WORD_BITS,
    CodeLayout,
    Coord,
    NetworkCode,
    Segment,
    build_layout,
    check_code,
    edge_width,
    layout_for,
)
from .evaluation import (
    BlockTrace,
    EvaluationTrace,
    all_assignments,
    check_linearity,
    evaluate,
    evaluate_block,
    global_key_map,
    induced_table,
    is_linear,
    linear_to_general,
    split_sources,
    with_induced_decoders,
)

__all__ = [
    'GF2',
    'Gf2Matrix',
    'bits_to_ints',
    'ints_to_bits',
    'EdgeFunction',
    'KeyMap',
    'TruthTable',
    'as_truth_table',
    'precompose',
    'same_function',
    'MAX_WORD_BITS',
    'CodeLayout',
    'Coord',
    'NetworkCode',
    'Segment',
    'build_layout',
    'check_code',
    'edge_width',
    'layout_for',
    'BlockTrace',
    'EvaluationTrace',
    'all_assignments',
    'check_linearity',
    'evaluate',
    'evaluate_block',
    'global_key_map',
    'induced_table',
    'is_linear',
    'linear_to_general',
    'split_sources',
    'with_induced_decoders',
]
