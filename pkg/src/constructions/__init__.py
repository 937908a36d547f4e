# Builders for the reference networks and codes
from .gap import (
    GAP_FAMILY,
    EavesdropMode,
    gap_cut_bounds,
    gap_instance,
    gap_r,
    sum_code,
    two_stage_gap_code,
    two_stage_upper_bound,
)
from .figures import (
    FIG1B_FAMILY,
    RELAY_FAMILY,
    fig1b_code,
    fig1b_instance,
    fig1b_instance_and_code,
    relay_code,
    relay_instance,
)
from .random_codes import (
    random_balanced_table,
    random_full_rank,
    random_linear_key_code,
    random_secure_code,
    random_single_source_code,
)

__all__ = [
    'GAP_FAMILY',
    'EavesdropMode',
    'gap_cut_bounds',
    'gap_instance',
    'gap_r',
    'sum_code',
    'two_stage_gap_code',
    'two_stage_upper_bound',
    'FIG1B_FAMILY',
    'RELAY_FAMILY',
    'fig1b_code',
    'fig1b_instance',
    'fig1b_instance_and_code',
    'relay_code',
    'relay_instance',
    'random_balanced_table',
    'random_full_rank',
    'random_linear_key_code',
    'random_secure_code',
    'random_single_source_code',
]
