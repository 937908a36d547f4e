# Exhaustive search for the largest feasible key rate within a CodeShape
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..analysis import (
    CheckMode,
    FeasibilityReport,
    check_key_feasibility,
    check_secure_feasibility,
    check_two_stage_feasibility,
    find_two_stage_witness,
    format_rate,
)
from ..coding import Coord, Gf2Matrix, KeyMap, NetworkCode, TruthTable, with_induced_decoders
from ..config import get_settings
from ..constructions import GAP_FAMILY
from ..core.parallel import run_chunks
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance
from .candidates import CandidateSpace
from .keys import balanced_tables, message_coords, projection_bank
from .shape import CodeShape

logger = logging.getLogger(__name__)

SEARCH_FORMAT = "keycast-search/1"
CURSOR_FORMAT = "keycast-cursor/1"

# Candidates per chunk; fixed so results never depend on the number of workers.
CHUNK_CANDIDATES = 4096


@dataclass(frozen=True)
class ChunkOutcome:
    best_bits: int  # -1 when nothing beat the floor
    position: Optional[int]
    key_index: Optional[int]
    examined: int
    reached_ceiling: bool


class _KeySearcher:
    """Per-candidate test: the widest key (above a floor) the candidate's encoders support."""

    def __init__(self, instance: NetworkInstance, mode: CheckMode, shape: CodeShape,
                 budget: Optional[int], key_budget: Optional[int]):
        self.instance = instance
        self.mode = mode
        self.shape = shape
        self.space = CandidateSpace(instance, shape, budget)
        self.key_budget = get_settings().key_budget if key_budget is None else key_budget
        layout = self.space.layout
        self.ell = layout.total_bits
        self.message_coords = message_coords(layout, instance.message_sources)

        ceiling = self.ell if shape.max_key_bits is None else min(shape.max_key_bits, self.ell)
        if instance.terminals:
            ceiling = min(ceiling, min(layout.input_width(d) for d in instance.terminals))
        if mode is CheckMode.SEC:
            ceiling = min(ceiling, len(self.message_coords))
        self.ceiling = ceiling
        self._banks: Dict[int, np.ndarray] = {}
        self._subsets: Dict[int, List[Tuple[Coord, ...]]] = {}
        self._check_converse = mode is CheckMode.KEY and instance.family == GAP_FAMILY

    def bank(self, k: int) -> np.ndarray:
        if k not in self._banks:
            if self.mode is CheckMode.SEC:
                self._banks[k], self._subsets[k] = projection_bank(
                    self.space.layout, self.message_coords, k, self.key_budget)
            else:
                self._banks[k] = balanced_tables(self.ell, k, self.key_budget)
        return self._banks[k]

    def subset(self, k: int, index: int) -> Tuple[Coord, ...]:
        self.bank(k)
        return self._subsets[k][index]

    def _views(self, values: Dict[str, np.ndarray]) -> List[Tuple[np.ndarray, np.ndarray]]:
        """(one-hot class matrix, class sizes) of every eavesdropper view."""
        layout = self.space.layout
        views = []
        for beta in self.instance.eavesdrop_sets:
            packed = np.zeros(self.space.assignments.shape, dtype=np.int64)
            for edge in sorted(beta.edges):
                packed = (packed << layout.edge_width[edge]) | values[edge]
            for source in self.instance.source_nodes:
                if source in beta.observed_sources:
                    packed = (packed << layout.source_bits[source]) | self.space.source_values[source]
            _, inverse = np.unique(packed, return_inverse=True)
            onehot = np.zeros((packed.size, int(inverse.max()) + 1), dtype=np.int64)
            onehot[np.arange(packed.size), inverse] = 1
            views.append((onehot, onehot.sum(axis=0)))
        return views

    def _recoverable_mask(self, reps: Sequence[np.ndarray]) -> int:
        m = self.space.assignments
        mask = 0
        for coord in self.space.layout.all_coords():
            shift = self.ell - 1 - self.space.layout.global_bit(coord)
            bit = (m >> shift) & 1
            if all(np.array_equal(bit, bit[rep]) for rep in reps):
                mask |= 1 << shift
        return mask

    def best_key(self, position: int, floor: int) -> Optional[Tuple[int, int]]:
        """(k, bank row) of the first key in bank order at the largest k > floor, or None."""
        if floor >= self.ceiling:
            return None
        values = self.space.edge_values(position)
        reps, classes = [], []
        for terminal in self.instance.terminals:
            x = self.space.pack_input(terminal, values)
            _, first, inverse = np.unique(x, return_index=True, return_inverse=True)
            reps.append(first[inverse])
            classes.append(first.size)
        if self.mode is CheckMode.KEY2:
            # K must be a function of the bits every terminal recovers.
            mask = self._recoverable_mask(reps)
            reps = [self.space.assignments & mask]
            classes = [1 << bin(mask).count("1")]
        fewest = min(classes) if classes else 1 << self.ell
        views = None

        for k in range(self.ceiling, floor, -1):
            if (1 << k) > fewest:
                continue
            bank = self.bank(k)
            ok = np.ones(bank.shape[0], dtype=bool)
            for rep in reps:
                ok &= np.all(bank == bank[:, rep], axis=1)
                if not ok.any():
                    break
            rows = np.flatnonzero(ok)
            if rows.size == 0:
                continue
            if views is None:
                views = self._views(values)
            passing = np.ones(rows.size, dtype=bool)
            sub = bank[rows]
            for onehot, sizes in views:
                for value in range(1 << k):
                    counts = (sub == value).astype(np.int64) @ onehot
                    passing &= np.all(counts << k == sizes, axis=1)
            if passing.any():
                if self._check_converse and k > self.shape.blocklength:
                    raise RuntimeError(
                        f"candidate {position} carries a {k}-bit secret key at n={self.shape.blocklength}, "
                        f"contradicting the gap-network converse k <= n"
                    )
                return k, int(rows[np.flatnonzero(passing)[0]])
        return None

    def scan(self, start: int, stop: int, floor: int) -> ChunkOutcome:
        best: Optional[Tuple[int, int, int]] = None
        for position in range(start, stop):
            found = self.best_key(position, floor)
            if found is None:
                continue
            floor = found[0]
            best = (found[0], position, found[1])
            if floor >= self.ceiling:
                return ChunkOutcome(floor, position, found[1], position - start + 1, True)
        if best is None:
            return ChunkOutcome(-1, None, None, stop - start, False)
        return ChunkOutcome(best[0], best[1], best[2], stop - start, False)

    def key_for(self, k: int, index: Optional[int]) -> Tuple[KeyMap, Optional[Tuple[Coord, ...]]]:
        layout = self.space.layout
        if self.mode is CheckMode.SEC:
            subset = self.subset(k, index) if k else ()
            rows = np.zeros((k, self.ell), dtype=np.uint8)
            for row, coord in enumerate(subset):
                rows[row, layout.global_bit(coord)] = 1
            return KeyMap(Gf2Matrix(rows)), tuple(subset)
        if k == 0:
            return KeyMap(Gf2Matrix.zeros(0, self.ell)), None
        return KeyMap(TruthTable(self.ell, k, self.bank(k)[index])), None


def _scan_chunk(args) -> ChunkOutcome:
    instance, mode, shape, budget, key_budget, start, stop, floor = args
    return _KeySearcher(instance, mode, shape, budget, key_budget).scan(start, stop, floor)


@dataclass
class SearchCursor:
    """Where a search stands: resume from `next` keeping the best found so far."""

    mode: str
    shape: str
    start: int
    stop: int
    next: int
    best_bits: int = -1
    best_position: Optional[int] = None
    best_key_index: Optional[int] = None
    examined: int = 0
    reached_ceiling: bool = False
    finished: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": CURSOR_FORMAT,
            "mode": self.mode,
            "shape": self.shape,
            "start": self.start,
            "stop": self.stop,
            "next": self.next,
            "best_bits": self.best_bits,
            "best_position": self.best_position,
            "best_key_index": self.best_key_index,
            "examined": self.examined,
            "reached_ceiling": self.reached_ceiling,
            "finished": self.finished,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SearchCursor":
        if data.get("format") != CURSOR_FORMAT:
            raise KeycastError(ErrorCode.BAD_FORMAT, f"expected format {CURSOR_FORMAT}, got {data.get('format')!r}")
        fields = {k: data[k] for k in ("mode", "shape", "start", "stop", "next") if k in data}
        if len(fields) != 5:
            raise KeycastError(ErrorCode.BAD_FORMAT, "cursor is missing mode, shape, start, stop or next")
        return cls(
            **fields,
            best_bits=int(data.get("best_bits", -1)),
            best_position=data.get("best_position"),
            best_key_index=data.get("best_key_index"),
            examined=int(data.get("examined", 0)),
            reached_ceiling=bool(data.get("reached_ceiling", False)),
            finished=bool(data.get("finished", False)),
        )


@dataclass
class SearchResult:
    mode: CheckMode
    shape: CodeShape
    best_rate: Fraction
    key_bits: int
    position: Optional[int]
    witness: Optional[NetworkCode]
    coords: Optional[List[Coord]]
    examined: int
    candidates: int
    start: int
    stop: int
    exhaustive: bool
    certified_optimal: bool
    report: Optional[FeasibilityReport] = None
    cursor: Optional[SearchCursor] = field(default=None, repr=False)

    @property
    def shape_relative(self) -> bool:
        return self.shape.shape_relative

    def to_dict(self) -> Dict[str, Any]:
        from ..utils.formats import code_to_dict

        return {
            "format": SEARCH_FORMAT,
            "mode": self.mode.value,
            "shape": self.shape.to_text(),
            "best_rate": format_rate(self.best_rate),
            "key_bits": self.key_bits,
            "position": self.position,
            "coords": [[s, j] for s, j in self.coords] if self.coords is not None else None,
            "examined": self.examined,
            "candidates": self.candidates,
            "start": self.start,
            "stop": self.stop,
            "exhaustive": self.exhaustive,
            "certified_optimal": self.certified_optimal,
            "shape_relative": self.shape_relative,
            "witness": code_to_dict(self.witness) if self.witness is not None else None,
            "report": self.report.to_dict() if self.report is not None else None,
        }


def _verify(instance: NetworkInstance, mode: CheckMode, code: NetworkCode, rate: Fraction,
            coords: Optional[Sequence[Coord]]) -> Tuple[FeasibilityReport, Optional[List[Coord]]]:
    if mode is CheckMode.KEY:
        report = check_key_feasibility(instance, code, rate)
    elif mode is CheckMode.SEC:
        report = check_secure_feasibility(instance, code, rate, coords)
        coords = list(coords)
    else:
        coords = find_two_stage_witness(instance, code, rate)
        if coords is None:
            raise RuntimeError(f"no two-stage witness for the selected key at R={format_rate(rate)}")
        report = check_two_stage_feasibility(instance, code, rate, coords)
    if not report.overall:
        raise RuntimeError(f"search witness failed re-verification: {', '.join(report.failed())}")
    return report, coords


def max_feasible_rate(
    instance: NetworkInstance,
    mode,
    shape: CodeShape,
    budget: Optional[int] = None,
    key_budget: Optional[int] = None,
    start: int = 0,
    stop: Optional[int] = None,
    jobs: Optional[int] = None,
    cursor: Optional[SearchCursor] = None,
    on_progress: Optional[Callable[[SearchCursor], None]] = None,
) -> SearchResult:
    """
    Largest k/n achieved by some candidate of `shape` in the chosen mode.

    Candidates are scanned in stream order, in chunks of fixed size; the winner
    is the largest key width, ties going to the earliest position, so the result
    does not depend on `jobs`. A rate-0 witness is the first candidate. The
    winning code is rebuilt with induced decoders and re-checked.
    """
    mode = CheckMode(mode)
    jobs = get_settings().jobs if jobs is None else jobs
    searcher = _KeySearcher(instance, mode, shape, budget, key_budget)
    space = searcher.space
    stop = space.count if stop is None else min(stop, space.count)
    if start < 0 or start > stop:
        raise KeycastError(ErrorCode.BAD_FORMAT, f"start {start} outside 0..{stop}")

    if cursor is None:
        cursor = SearchCursor(mode.value, shape.to_text(), start, stop, start)
    elif cursor.mode != mode.value or cursor.shape != shape.to_text():
        raise KeycastError(ErrorCode.BAD_FORMAT, "cursor was written for a different mode or shape")
    start, stop = cursor.start, min(cursor.stop, space.count)

    logger.info("Searching %d candidates (%s, mode=%s, ceiling k=%d)",
                stop - cursor.next, shape.to_text(), mode.value, searcher.ceiling)
    bounds = [(a, min(a + CHUNK_CANDIDATES, stop)) for a in range(cursor.next, stop, CHUNK_CANDIDATES)]
    for batch_start in range(0, len(bounds), max(jobs, 1)):
        batch = bounds[batch_start:batch_start + max(jobs, 1)]
        args = [(instance, mode, shape, budget, key_budget, a, b, max(cursor.best_bits, 0)) for a, b in batch]
        outcomes = run_chunks(_scan_chunk, args, jobs)
        for (a, b), outcome in zip(batch, outcomes):
            cursor.examined += outcome.examined
            cursor.next = b
            if outcome.best_bits > cursor.best_bits:
                cursor.best_bits = outcome.best_bits
                cursor.best_position = outcome.position
                cursor.best_key_index = outcome.key_index
            if outcome.reached_ceiling:
                cursor.reached_ceiling = True
                break
        if on_progress is not None:
            on_progress(cursor)
        if cursor.reached_ceiling:
            break
    reached_ceiling = cursor.reached_ceiling
    cursor.finished = True
    exhaustive = not reached_ceiling and start == 0 and stop == space.count

    key_bits = max(cursor.best_bits, 0)
    position = cursor.best_position if cursor.best_bits > 0 else (start if stop > start else None)
    rate = Fraction(key_bits, shape.blocklength)
    witness, coords, report = None, None, None
    if position is not None:
        key, subset = searcher.key_for(key_bits, cursor.best_key_index if key_bits else None)
        draft = space.code_at(position).with_changes(
            key=key, message_coords=subset if mode is CheckMode.SEC else None)
        witness = with_induced_decoders(instance, draft)
        report, coords = _verify(instance, mode, witness, rate, subset)

    result = SearchResult(
        mode=mode,
        shape=shape,
        best_rate=rate,
        key_bits=key_bits,
        position=position,
        witness=witness,
        coords=coords,
        examined=cursor.examined,
        candidates=space.count,
        start=start,
        stop=stop,
        exhaustive=exhaustive,
        certified_optimal=exhaustive or reached_ceiling or key_bits >= searcher.ceiling,
        report=report,
        cursor=cursor,
    )
    logger.info("✓ Best %s rate %s over %d candidates%s", mode.value, format_rate(rate), cursor.examined,
                " (certified)" if result.certified_optimal else "")
    return result


def feasible_rates(instance: NetworkInstance, mode, shapes: Sequence[CodeShape], **kwargs) -> Dict[str, str]:
    """Best rate per shape text; a quick sweep over blocklengths or bit counts."""
    return {shape.to_text(): format_rate(max_feasible_rate(instance, mode, shape, **kwargs).best_rate)
            for shape in shapes}
