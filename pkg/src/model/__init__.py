# Network-coding instances and graph bounds
from .instance import (
    Edge,
    EavesdropSet,
    NetworkInstance,
    SourceDecl,
    SourceRole,
    make_edge,
    refine_to_secure,
)
from .validation import ValidationReport, Violation, ViolationCode, validate
from .graph import min_cut, multicast_cut_bound, to_digraph, topological_order

__all__ = [
    'Edge',
    'EavesdropSet',
    'NetworkInstance',
    'SourceDecl',
    'SourceRole',
    'make_edge',
    'refine_to_secure',
    'ValidationReport',
    'Violation',
    'ViolationCode',
    'validate',
    'min_cut',
    'multicast_cut_bound',
    'to_digraph',
    'topological_order',
]
