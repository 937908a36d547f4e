# CodeShape: which codes a search ranges over
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance


class EncoderFamily(str, Enum):
    ALL_TABLES = "tables"
    LINEAR = "linear"


class SourceBehavior(str, Enum):
    FREE = "free"
    FORWARD = "forward"  # sources repeat their own bits on every outgoing edge


@dataclass(frozen=True)
class CodeShape:
    blocklength: int = 1
    bits_per_source: int = 1
    family: EncoderFamily = EncoderFamily.ALL_TABLES
    sources: SourceBehavior = SourceBehavior.FORWARD
    max_key_bits: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> "CodeShape":
        """
        Comma-separated text such as 'n=1,l=1,forward,tables,k=1'.

        Flags: tables | linear, forward | free; keys: n, l, k. Anything omitted keeps its default.
        """
        values: Dict[str, object] = {}
        for token in filter(None, (t.strip().lower() for t in text.split(","))):
            name, sep, raw = token.partition("=")
            if not sep:
                if token in ("tables", "all_tables"):
                    values["family"] = EncoderFamily.ALL_TABLES
                elif token == "linear":
                    values["family"] = EncoderFamily.LINEAR
                elif token in ("forward", "free"):
                    values["sources"] = SourceBehavior(token)
                else:
                    raise KeycastError(ErrorCode.BAD_FORMAT, f"unknown shape flag '{token}'")
                continue
            if not raw.isdigit():
                raise KeycastError(ErrorCode.BAD_FORMAT, f"shape value '{token}' is not a nonnegative integer")
            field_name = {"n": "blocklength", "l": "bits_per_source", "k": "max_key_bits"}.get(name)
            if field_name is None:
                raise KeycastError(ErrorCode.BAD_FORMAT, f"unknown shape key '{name}'")
            values[field_name] = int(raw)
        shape = cls(**values)
        if shape.blocklength < 1:
            raise KeycastError(ErrorCode.BAD_FORMAT, "shape blocklength must be positive")
        return shape

    def to_text(self) -> str:
        parts = [f"n={self.blocklength}", f"l={self.bits_per_source}", self.sources.value, self.family.value]
        if self.max_key_bits is not None:
            parts.append(f"k={self.max_key_bits}")
        return ",".join(parts)

    def source_bits(self, instance: NetworkInstance) -> Dict[str, int]:
        return {s: self.bits_per_source for s in instance.source_nodes}

    @property
    def shape_relative(self) -> bool:
        return self.sources is SourceBehavior.FORWARD
