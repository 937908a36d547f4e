# Exact joint counts of code variables over all 2^l uniform assignments
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..coding import NetworkCode, check_code, evaluate_block
from ..config import get_settings
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance
from .variables import Variable

logger = logging.getLogger(__name__)

COUNT = "count"

VarRef = Union[Variable, str]


def _label(ref: VarRef) -> str:
    return ref.label if isinstance(ref, Variable) else ref


class CountTable:
    """
    Joint law of some variables, held as integer counts in a DataFrame.

    One column per variable label plus a `count` column; rows with zero
    count are never stored. Counts always add up to `total`.
    """

    def __init__(self, variables: Sequence[Variable], frame: pd.DataFrame, total: int):
        self.variables = tuple(variables)
        self.frame = frame.reset_index(drop=True)
        self.total = int(total)
        if int(self.frame[COUNT].sum()) != self.total:
            raise AssertionError(f"counts sum to {int(self.frame[COUNT].sum())}, expected {self.total}")

    @property
    def labels(self) -> List[str]:
        return [v.label for v in self.variables]

    def variable(self, ref: VarRef) -> Variable:
        label = _label(ref)
        for var in self.variables:
            if var.label == label:
                return var
        raise KeyError(f"variable '{label}' is not in this table")

    @classmethod
    def from_arrays(
        cls, variables: Sequence[Variable], arrays: Sequence[np.ndarray], size: Optional[int] = None
    ) -> "CountTable":
        """Count distinct value rows; `size` gives the sample count when there are no variables."""
        labels = [v.label for v in variables]
        if not variables:
            size = int(size or 0)
            return cls(variables, pd.DataFrame({COUNT: [size]}), size)
        stacked = np.stack([np.asarray(a, dtype=np.int64) for a in arrays], axis=1)
        rows, counts = np.unique(stacked, axis=0, return_counts=True)
        frame = pd.DataFrame(rows, columns=labels)
        frame[COUNT] = counts.astype(np.int64)
        return cls(variables, frame, int(stacked.shape[0]))

    @classmethod
    def from_counts(cls, variables: Sequence[Variable], counts: Mapping[Tuple[int, ...], int]) -> "CountTable":
        labels = [v.label for v in variables]
        records = [list(key) + [int(c)] for key, c in sorted(counts.items()) if c]
        frame = pd.DataFrame(records, columns=labels + [COUNT]).astype(np.int64)
        return cls(variables, frame, int(sum(counts.values())))

    @classmethod
    def merge(cls, tables: Iterable["CountTable"]) -> "CountTable":
        """Sum of partial tables over disjoint assignment ranges."""
        tables = list(tables)
        variables = tables[0].variables
        labels = tables[0].labels
        total = sum(t.total for t in tables)
        frame = pd.concat([t.frame for t in tables], ignore_index=True)
        if labels:
            frame = frame.groupby(labels, as_index=False, sort=True)[COUNT].sum()
        else:
            frame = pd.DataFrame({COUNT: [int(frame[COUNT].sum())]})
        return cls(variables, frame, total)

    def marginal(self, refs: Sequence[VarRef]) -> "CountTable":
        labels = [_label(r) for r in refs]
        variables = [self.variable(label) for label in labels]
        if not labels:
            return CountTable([], pd.DataFrame({COUNT: [self.total]}), self.total)
        frame = self.frame.groupby(labels, as_index=False, sort=True)[COUNT].sum()
        return CountTable(variables, frame, self.total)

    def counts(self) -> Dict[Tuple[int, ...], int]:
        labels = self.labels
        return {
            tuple(int(v) for v in row[:-1]): int(row[-1])
            for row in self.frame[labels + [COUNT]].itertuples(index=False, name=None)
        }

    def __len__(self) -> int:
        return len(self.frame)

    def __repr__(self) -> str:
        return f"CountTable({self.labels}, rows={len(self)}, total={self.total})"


@dataclass
class ScanResult:
    tables: Dict[str, CountTable]
    mismatches: Dict[str, Optional[int]]
    total_bits: int


def scan(
    instance: NetworkInstance,
    code: NetworkCode,
    groups: Mapping[str, Sequence[Variable]],
    equalities: Optional[Mapping[str, Tuple[Variable, Variable]]] = None,
    enum_cap: Optional[int] = None,
    chunk_bits: Optional[int] = None,
) -> ScanResult:
    """
    One streaming pass over all assignments.

    Builds a CountTable per group and, for each named pair of variables, the
    first assignment on which they differ (None when they agree everywhere).
    """
    settings = get_settings()
    enum_cap = settings.enum_cap if enum_cap is None else enum_cap
    chunk_bits = settings.chunk_bits if chunk_bits is None else chunk_bits
    equalities = equalities or {}

    layout = check_code(instance, code)
    ell = layout.total_bits
    if ell > enum_cap:
        raise KeycastError(ErrorCode.SPACE_LIMIT, f"enumerating 2^{ell} assignments exceeds cap 2^{enum_cap}",
                           bits=ell, cap=enum_cap)

    space = 1 << ell
    chunk = 1 << chunk_bits
    partial: Dict[str, List[CountTable]] = {name: [] for name in groups}
    mismatches: Dict[str, Optional[int]] = {name: None for name in equalities}
    for start in range(0, space, chunk):
        block = evaluate_block(instance, code, np.arange(start, min(start + chunk, space), dtype=np.int64), layout)
        for name, variables in groups.items():
            partial[name].append(CountTable.from_arrays(
                variables, [v.values(block) for v in variables], size=block.assignments.shape[0]
            ))
        for name, (left, right) in equalities.items():
            if mismatches[name] is not None:
                continue
            differ = np.flatnonzero(left.values(block) != right.values(block))
            if differ.size:
                mismatches[name] = int(block.assignments[differ[0]])

    tables = {name: CountTable.merge(parts) for name, parts in partial.items()}
    for name, table in tables.items():
        assert table.total == space, f"table '{name}' covers {table.total} of {space} assignments"
    logger.debug("scanned 2^%d assignments into %d tables", ell, len(tables))
    return ScanResult(tables=tables, mismatches=mismatches, total_bits=ell)


def joint_counts(
    instance: NetworkInstance,
    code: NetworkCode,
    variables: Sequence[Variable],
    enum_cap: Optional[int] = None,
    chunk_bits: Optional[int] = None,
) -> CountTable:
    result = scan(instance, code, {"joint": list(variables)}, enum_cap=enum_cap, chunk_bits=chunk_bits)
    return result.tables["joint"]
