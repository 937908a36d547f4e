# Constructive code transformations
from .preencoding import (
    Permutation,
    apply_preencoding,
    precompose_at_source,
    preencoding_permutation,
)
from .linear import linear_key_to_secure, zero_redundant_columns
from .reduction import (
    KEY_TERMINAL,
    REDUCED_FAMILY,
    lift_secure_code,
    reduce_secure_to_key,
    restrict_key_code_to_secure,
)

__all__ = [
    'Permutation',
    'apply_preencoding',
    'precompose_at_source',
    'preencoding_permutation',
    'linear_key_to_secure',
    'zero_redundant_columns',
    'KEY_TERMINAL',
    'REDUCED_FAMILY',
    'lift_secure_code',
    'reduce_secure_to_key',
    'restrict_key_code_to_secure',
]
