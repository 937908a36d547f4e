# Feasibility checks for key-dissemination, secure multicast and two-stage decoding
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..coding import CodeLayout, Coord, NetworkCode, check_code
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance
from .count_table import COUNT, scan
from .measures import (
    conditional_entropy_bits,
    entropy_bits,
    is_determined,
    is_independent,
    is_uniform,
    mutual_information_bits,
)
from .variables import Variable, bits_var, decoder_var, eavesdrop_view, input_var, key_var

logger = logging.getLogger(__name__)

REPORT_FORMAT = "keycast-report/1"
VERDICTS = ("rate_ok", "decoding_ok", "secrecy_ok", "witness_ok")


class CheckMode(str, Enum):
    KEY = "key"
    SEC = "sec"
    KEY2 = "key2"


@dataclass
class Verdict:
    ok: bool
    applicable: bool = True
    detail: str = ""
    counterexample: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "applicable": self.applicable,
            "detail": self.detail,
            "counterexample": self.counterexample,
        }


NOT_APPLICABLE = Verdict(ok=True, applicable=False, detail="not part of this mode")


@dataclass
class FeasibilityReport:
    mode: CheckMode
    rate: Fraction
    blocklength: int
    key_bits: int
    total_bits: int
    verdicts: Dict[str, Verdict]
    advisory: Dict[str, float] = field(default_factory=dict)
    coords: Optional[List[Coord]] = None

    @property
    def overall(self) -> bool:
        return all(v.ok for v in self.verdicts.values() if v.applicable)

    def failed(self) -> List[str]:
        return [name for name, v in self.verdicts.items() if v.applicable and not v.ok]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": REPORT_FORMAT,
            "mode": self.mode.value,
            "rate": format_rate(self.rate),
            "blocklength": self.blocklength,
            "key_bits": self.key_bits,
            "source_bits": self.total_bits,
            "overall": "pass" if self.overall else "fail",
            "verdicts": {name: self.verdicts[name].to_dict() for name in VERDICTS},
            "advisory": {name: _stable_float(v) for name, v in sorted(self.advisory.items())},
            "coords": [[s, j] for s, j in self.coords] if self.coords is not None else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FeasibilityReport":
        if data.get("format") != REPORT_FORMAT:
            raise KeycastError(ErrorCode.BAD_FORMAT, f"expected a {REPORT_FORMAT} document")
        coords = data.get("coords")
        return cls(
            mode=CheckMode(data["mode"]),
            rate=parse_rate(data["rate"]),
            blocklength=int(data["blocklength"]),
            key_bits=int(data["key_bits"]),
            total_bits=int(data["source_bits"]),
            verdicts={name: Verdict(**data["verdicts"][name]) for name in VERDICTS},
            advisory=dict(data.get("advisory", {})),
            coords=[(s, int(j)) for s, j in coords] if coords is not None else None,
        )


def _stable_float(value: float) -> float:
    # -0.0 and 1e-17 noise would make reports differ byte-wise.
    return round(value, 9) + 0.0


def format_rate(rate: Fraction) -> str:
    return f"{rate.numerator}/{rate.denominator}"


def parse_rate(text: Any) -> Fraction:
    """Exact rates only: 'P/Q' or an integer; decimals are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    raw = str(text).strip()
    num, _, den = raw.partition("/")
    if not num.strip().lstrip("-").isdigit() or (den and not den.strip().isdigit()):
        raise KeycastError(ErrorCode.BAD_RATE, f"rate '{raw}' is not of the form P/Q")
    if den and int(den) == 0:
        raise KeycastError(ErrorCode.BAD_RATE, f"rate '{raw}' has a zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def format_assignment(assignment: int, total_bits: int) -> str:
    return f"0x{assignment:0{max(1, math.ceil(total_bits / 4))}x}"


def key_width_for(rate: Fraction, blocklength: int) -> int:
    if rate < 0:
        raise KeycastError(ErrorCode.BAD_RATE, f"rate {format_rate(rate)} is negative")
    bits = rate * blocklength
    if bits.denominator != 1:
        raise KeycastError(
            ErrorCode.BAD_RATE,
            f"R*n = {bits} is not an integer at n={blocklength}; choose n so that the key has whole bits",
        )
    return int(bits)


def _validate_coords(
    layout: CodeLayout, coords: Sequence[Coord], allowed: Sequence[str], code: ErrorCode
) -> List[Coord]:
    normalized = [(str(s), int(j)) for s, j in coords]
    if len(set(normalized)) != len(normalized):
        raise KeycastError(code, "coordinates must be duplicate-free")
    for node, j in normalized:
        if node not in allowed:
            raise KeycastError(code, f"'{node}' is not an eligible source for these coordinates", coord=[node, j])
        if not layout.valid_coord((node, j)):
            raise KeycastError(code, f"bit {j} of '{node}' is outside its {layout.source_bits.get(node, 0)} bits",
                               coord=[node, j])
    return normalized


class _Checker:
    """Shared plumbing of the three checks: one scan, then verdicts from its tables."""

    def __init__(self, instance: NetworkInstance, code: NetworkCode, rate, enum_cap, chunk_bits):
        self.instance = instance
        self.code = code
        self.rate = parse_rate(rate)
        self.layout = check_code(instance, code)
        self.expected_bits = key_width_for(self.rate, code.blocklength)
        self.enum_cap = enum_cap
        self.chunk_bits = chunk_bits
        self.key = key_var(code)
        self.views = [eavesdrop_view(instance, self.layout, beta) for beta in instance.eavesdrop_sets]

    def hex(self, assignment: int) -> str:
        return format_assignment(assignment, self.layout.total_bits)

    def run(self, extra_groups=None, extra_equalities=None):
        groups: Dict[str, List[Variable]] = {"key": [self.key]}
        for index, view in enumerate(self.views):
            groups[f"beta:{index}"] = [self.key] + view
        for terminal in self.instance.terminals:
            groups[f"terminal:{terminal}"] = [input_var(self.layout, terminal), self.key]
        groups.update(extra_groups or {})
        equalities = {
            f"decoder:{d}": (decoder_var(self.code, d), self.key) for d in self.instance.terminals
        }
        equalities.update(extra_equalities or {})
        self.result = scan(self.instance, self.code, groups, equalities,
                           enum_cap=self.enum_cap, chunk_bits=self.chunk_bits)
        return self.result

    def rate_verdict(self) -> Verdict:
        k = self.code.key_bits
        if k != self.expected_bits:
            return Verdict(False, detail=f"key has {k} bits but R*n = {self.expected_bits}")
        if k > self.layout.total_bits:
            return Verdict(False, detail=f"a {k}-bit key cannot be uniform over {self.layout.total_bits} source bits")
        table = self.result.tables["key"]
        if not is_uniform(table, [self.key], k):
            counts = np.zeros(1 << k, dtype=np.int64)
            counts[table.frame[self.key.label].to_numpy()] = table.frame[COUNT].to_numpy()
            value = int(np.argmin(counts))
            return Verdict(False, detail=f"key is not uniform on {k} bits",
                           counterexample={"key_value": value, "count": int(counts[value])})
        return Verdict(True, detail=f"key uniform on {k} bits")

    def decoding_verdict(self) -> Verdict:
        for terminal in self.instance.terminals:
            bad = self.result.mismatches[f"decoder:{terminal}"]
            if bad is not None:
                return Verdict(False, detail=f"terminal '{terminal}' decodes a different value than the key",
                               counterexample={"terminal": terminal, "assignment": self.hex(bad)})
        return Verdict(True, detail=f"all {len(self.instance.terminals)} terminals output the key")

    def secrecy_verdict(self) -> Verdict:
        for index, view in enumerate(self.views):
            table = self.result.tables[f"beta:{index}"]
            if not is_independent(table, [self.key], view):
                return Verdict(False, detail=f"eavesdrop set {index} is correlated with the key",
                               counterexample={"eavesdrop_set": index})
        return Verdict(True, detail=f"key independent of all {len(self.views)} eavesdrop views")

    def advisory(self) -> Dict[str, float]:
        tables = self.result.tables
        leak = [mutual_information_bits(tables[f"beta:{i}"], [self.key], view) for i, view in enumerate(self.views)]
        residual = [
            conditional_entropy_bits(tables[f"terminal:{d}"], [self.key], [input_var(self.layout, d)])
            for d in self.instance.terminals
        ]
        return {
            "key_entropy_bits": entropy_bits(tables["key"], [self.key]),
            "max_leakage_bits": max([0.0] + leak),
            "max_terminal_equivocation_bits": max([0.0] + residual),
        }

    def report(self, mode: CheckMode, verdicts: Dict[str, Verdict], coords=None) -> FeasibilityReport:
        report = FeasibilityReport(
            mode=mode,
            rate=self.rate,
            blocklength=self.code.blocklength,
            key_bits=self.code.key_bits,
            total_bits=self.layout.total_bits,
            verdicts=verdicts,
            advisory=self.advisory(),
            coords=coords,
        )
        if report.overall:
            logger.info("✓ %s check passed at R=%s, n=%d", mode.value, format_rate(self.rate), self.code.blocklength)
        else:
            logger.info("⚠ %s check failed at R=%s: %s", mode.value, format_rate(self.rate), ", ".join(report.failed()))
        return report


def check_key_feasibility(
    instance: NetworkInstance,
    code: NetworkCode,
    rate,
    enum_cap: Optional[int] = None,
    chunk_bits: Optional[int] = None,
) -> FeasibilityReport:
    """(R, n)_key-feasibility: uniform key, every terminal decodes it, every view independent of it."""
    checker = _Checker(instance, code, rate, enum_cap, chunk_bits)
    checker.run()
    verdicts = {
        "rate_ok": checker.rate_verdict(),
        "decoding_ok": checker.decoding_verdict(),
        "secrecy_ok": checker.secrecy_verdict(),
        "witness_ok": NOT_APPLICABLE,
    }
    return checker.report(CheckMode.KEY, verdicts)


def check_secure_feasibility(
    instance: NetworkInstance,
    code: NetworkCode,
    rate,
    message_coords: Optional[Sequence[Coord]] = None,
    enum_cap: Optional[int] = None,
    chunk_bits: Optional[int] = None,
) -> FeasibilityReport:
    """
    (R, n)_sec-feasibility: as key mode, and the key must be the message bits at
    `message_coords` in the order given (first coordinate is the key's top bit),
    checked pointwise.
    """
    checker = _Checker(instance, code, rate, enum_cap, chunk_bits)
    if message_coords is None:
        message_coords = code.message_coords or ()
    coords = _validate_coords(checker.layout, message_coords, instance.message_sources, ErrorCode.BAD_COORDS)
    projection = bits_var(coords)
    same_width = projection.width == code.key_bits
    checker.run(extra_equalities={"projection": (checker.key, projection)} if same_width else None)

    if not same_width:
        witness = Verdict(False, detail=f"{len(coords)} message coordinates cannot form a {code.key_bits}-bit key")
    elif checker.result.mismatches["projection"] is not None:
        witness = Verdict(False, detail="key is not the projection onto the message coordinates",
                          counterexample={"assignment": checker.hex(checker.result.mismatches["projection"])})
    else:
        witness = Verdict(True, detail=f"key equals message bits {projection.name or '(none)'}")
    verdicts = {
        "rate_ok": checker.rate_verdict(),
        "decoding_ok": checker.decoding_verdict(),
        "secrecy_ok": checker.secrecy_verdict(),
        "witness_ok": witness,
    }
    return checker.report(CheckMode.SEC, verdicts, coords)


def parse_witness(layout: CodeLayout, coords: Sequence[Coord]) -> List[Coord]:
    return _validate_coords(layout, coords, layout.sources, ErrorCode.BAD_WITNESS)


def check_two_stage_feasibility(
    instance: NetworkInstance,
    code: NetworkCode,
    rate,
    witness: Sequence[Coord],
    enum_cap: Optional[int] = None,
    chunk_bits: Optional[int] = None,
) -> FeasibilityReport:
    """Two-stage decoding: every terminal recovers the bits M, and K is a function of M."""
    checker = _Checker(instance, code, rate, enum_cap, chunk_bits)
    coords = parse_witness(checker.layout, witness)
    m_var = bits_var(coords)
    extra = {f"stage1:{d}": [input_var(checker.layout, d), m_var] for d in instance.terminals}
    extra["stage2"] = [m_var, checker.key]
    checker.run(extra_groups=extra)

    decoding = checker.decoding_verdict()
    if decoding.ok:
        for terminal in instance.terminals:
            table = checker.result.tables[f"stage1:{terminal}"]
            if not is_determined(table, [input_var(checker.layout, terminal)], [m_var]):
                decoding = Verdict(False, detail=f"terminal '{terminal}' cannot recover M from its inputs",
                                   counterexample={"terminal": terminal})
                break
        else:
            decoding = Verdict(True, detail="every terminal recovers M and outputs the key")

    if is_determined(checker.result.tables["stage2"], [m_var], [checker.key]):
        witness_verdict = Verdict(True, detail=f"key is a function of M = {m_var.name or '(empty)'}")
    else:
        witness_verdict = Verdict(False, detail="H(K|M) > 0: the key is not a function of M")
    verdicts = {
        "rate_ok": checker.rate_verdict(),
        "decoding_ok": decoding,
        "secrecy_ok": checker.secrecy_verdict(),
        "witness_ok": witness_verdict,
    }
    return checker.report(CheckMode.KEY2, verdicts, coords)


def check(
    instance: NetworkInstance,
    code: NetworkCode,
    mode,
    rate,
    coords: Optional[Sequence[Coord]] = None,
    enum_cap: Optional[int] = None,
    chunk_bits: Optional[int] = None,
) -> FeasibilityReport:
    """Dispatch on mode; key2 without coordinates is rejected (use find_two_stage_witness first)."""
    mode = CheckMode(mode)
    if mode is CheckMode.KEY:
        return check_key_feasibility(instance, code, rate, enum_cap, chunk_bits)
    if mode is CheckMode.SEC:
        return check_secure_feasibility(instance, code, rate, coords, enum_cap, chunk_bits)
    if coords is None:
        raise KeycastError(ErrorCode.BAD_WITNESS, "two-stage checks need a witness M")
    return check_two_stage_feasibility(instance, code, rate, coords, enum_cap, chunk_bits)


def coords_from_text(text: str) -> List[Tuple[str, int]]:
    """'s1:0,s2:0' -> [('s1', 0), ('s2', 0)]; an empty string is the empty set."""
    coords = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        node, sep, index = item.rpartition(":")
        if not sep or not index.isdigit():
            raise KeycastError(ErrorCode.BAD_COORDS, f"coordinate '{item}' is not of the form node:bit")
        coords.append((node, int(index)))
    return coords
