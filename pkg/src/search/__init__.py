# Enumeration of small codes and the maximum-rate search
from .shape import CodeShape, EncoderFamily, SourceBehavior
from .candidates import CandidateSpace, Slot, count_candidates, enumerate_codes, slot_function
from .keys import balanced_count, balanced_tables, message_coords, projection_bank
from .rate_search import (
    CHUNK_CANDIDATES,
    CURSOR_FORMAT,
    SEARCH_FORMAT,
    ChunkOutcome,
    SearchCursor,
    SearchResult,
    feasible_rates,
    max_feasible_rate,
)

__all__ = [
    'CodeShape',
    'EncoderFamily',
    'SourceBehavior',
    'CandidateSpace',
    'Slot',
    'count_candidates',
    'enumerate_codes',
    'slot_function',
    'balanced_count',
    'balanced_tables',
    'message_coords',
    'projection_bank',
    'CHUNK_CANDIDATES',
    'CURSOR_FORMAT',
    'SEARCH_FORMAT',
    'ChunkOutcome',
    'SearchCursor',
    'SearchResult',
    'feasible_rates',
    'max_feasible_rate',
]
