# Exact distributions and feasibility verdicts
from .variables import (
    Variable,
    bits_var,
    decoder_var,
    eavesdrop_view,
    edge_var,
    input_var,
    key_var,
    source_var,
)
from .count_table import CountTable, ScanResult, joint_counts, scan
from .measures import (
    conditional_entropy_bits,
    entropy_bits,
    is_determined,
    is_independent,
    is_uniform,
    mutual_information_bits,
)
from .feasibility import (
    REPORT_FORMAT,
    CheckMode,
    FeasibilityReport,
    Verdict,
    check,
    check_key_feasibility,
    check_secure_feasibility,
    check_two_stage_feasibility,
    coords_from_text,
    format_assignment,
    format_rate,
    key_width_for,
    parse_rate,
    parse_witness,
)
from .witness import find_two_stage_witness

__all__ = [
    'Variable',
    'bits_var',
    'decoder_var',
    'eavesdrop_view',
    'edge_var',
    'input_var',
    'key_var',
    'source_var',
    'CountTable',
    'ScanResult',
    'joint_counts',
    'scan',
    'conditional_entropy_bits',
    'entropy_bits',
    'is_determined',
    'is_independent',
    'is_uniform',
    'mutual_information_bits',
    'REPORT_FORMAT',
    'CheckMode',
    'FeasibilityReport',
    'Verdict',
    'check',
    'check_key_feasibility',
    'check_secure_feasibility',
    'check_two_stage_feasibility',
    'coords_from_text',
    'format_assignment',
    'format_rate',
    'key_width_for',
    'parse_rate',
    'parse_witness',
    'find_two_stage_witness',
]
