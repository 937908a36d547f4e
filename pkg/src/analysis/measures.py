# Exact predicates and advisory Shannon quantities on CountTables
from typing import Optional, Sequence

import numpy as np
from scipy.stats import entropy

from .count_table import COUNT, CountTable, VarRef, _label


def is_independent(table: CountTable, part_a: Sequence[VarRef], part_b: Sequence[VarRef]) -> bool:
    """count(a,b) * total == count(a) * count(b) for every pair of values, in integers."""
    a = [_label(r) for r in part_a]
    b = [_label(r) for r in part_b]
    if not a or not b:
        return True
    joint = table.marginal(a + b).frame
    left = table.marginal(a).frame.rename(columns={COUNT: "count_a"})
    right = table.marginal(b).frame.rename(columns={COUNT: "count_b"})
    # Every pair in the product of the supports must occur.
    if len(joint) != len(left) * len(right):
        return False
    merged = joint.merge(left, on=a).merge(right, on=b)
    lhs = merged[COUNT].to_numpy(dtype=object) * table.total
    rhs = merged["count_a"].to_numpy(dtype=object) * merged["count_b"].to_numpy(dtype=object)
    return bool(np.all(lhs == rhs))


def is_determined(table: CountTable, given: Sequence[VarRef], target: Sequence[VarRef]) -> bool:
    """Each value of `given` with positive count has exactly one `target` value."""
    g = [_label(r) for r in given]
    t = [_label(r) for r in target]
    if not t:
        return True
    joint = table.marginal(g + t).frame
    if not g:
        return len(joint) == 1
    return bool(joint.groupby(g).size().max() == 1)


def is_uniform(table: CountTable, variables: Sequence[VarRef], width: Optional[int] = None) -> bool:
    """All 2^width values occur equally often; width defaults to the variables' total width."""
    labels = [_label(r) for r in variables]
    if width is None:
        width = sum(table.variable(label).width for label in labels)
    marginal = table.marginal(labels).frame
    if len(marginal) != 1 << width:
        return False
    return bool(marginal[COUNT].nunique() == 1)


def entropy_bits(table: CountTable, variables: Sequence[VarRef]) -> float:
    counts = table.marginal(variables).frame[COUNT].to_numpy(dtype=float)
    return float(entropy(counts, base=2))


def conditional_entropy_bits(table: CountTable, target: Sequence[VarRef], given: Sequence[VarRef]) -> float:
    """H(target | given)."""
    return entropy_bits(table, list(given) + list(target)) - entropy_bits(table, given)


def mutual_information_bits(table: CountTable, part_a: Sequence[VarRef], part_b: Sequence[VarRef]) -> float:
    return (
        entropy_bits(table, part_a)
        + entropy_bits(table, part_b)
        - entropy_bits(table, list(part_a) + list(part_b))
    )
