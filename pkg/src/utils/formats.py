# Versioned JSON file formats for instances, codes, reports and search results
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from ..analysis import REPORT_FORMAT, FeasibilityReport
from ..coding import EdgeFunction, Gf2Matrix, KeyMap, NetworkCode, TruthTable
from ..errors import ErrorCode, KeycastError
from ..model import EavesdropSet, Edge, NetworkInstance, SourceDecl, SourceRole
from ..search import CURSOR_FORMAT, SEARCH_FORMAT

logger = logging.getLogger(__name__)

INSTANCE_FORMAT = "keycast-instance/1"
CODE_FORMAT = "keycast-code/1"
PERMUTATION_FORMAT = "keycast-permutation/1"


# Instance files

class CapacityDoc(BaseModel):
    num: int
    den: int = 1

    @field_validator("den")
    @classmethod
    def positive_den(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("capacity denominator must be positive")
        return value


class EdgeDoc(BaseModel):
    id: str
    tail: str
    head: str
    capacity: CapacityDoc


class SourceDoc(BaseModel):
    node: str
    role: SourceRole = SourceRole.BOTH


class EavesdropDoc(BaseModel):
    edges: List[str] = []
    observed_sources: List[str] = []


class InstanceDocument(BaseModel):
    format: Literal["keycast-instance/1"] = INSTANCE_FORMAT
    nodes: List[str]
    edges: List[EdgeDoc]
    sources: List[SourceDoc]
    terminals: List[str]
    eavesdrop_sets: List[EavesdropDoc] = []
    family: Optional[str] = None
    params: Dict[str, Any] = {}

    @classmethod
    def from_instance(cls, instance: NetworkInstance) -> "InstanceDocument":
        return cls(
            nodes=list(instance.nodes),
            edges=[
                EdgeDoc(id=e.id, tail=e.tail, head=e.head,
                        capacity=CapacityDoc(num=e.capacity.numerator, den=e.capacity.denominator))
                for e in instance.edges
            ],
            sources=[SourceDoc(node=s.node, role=s.role) for s in instance.sources],
            terminals=list(instance.terminals),
            eavesdrop_sets=[
                EavesdropDoc(edges=sorted(b.edges), observed_sources=sorted(b.observed_sources))
                for b in instance.eavesdrop_sets
            ],
            family=instance.family,
            params=json.loads(json.dumps(dict(instance.params), sort_keys=True)),
        )

    def to_instance(self) -> NetworkInstance:
        return NetworkInstance(
            nodes=tuple(self.nodes),
            edges=tuple(Edge(e.id, e.tail, e.head, Fraction(e.capacity.num, e.capacity.den)) for e in self.edges),
            sources=tuple(SourceDecl(s.node, s.role) for s in self.sources),
            terminals=tuple(self.terminals),
            eavesdrop_sets=tuple(EavesdropSet.of(b.edges, b.observed_sources) for b in self.eavesdrop_sets),
            family=self.family,
            params=dict(self.params),
        )


# Code files

class TableDoc(BaseModel):
    type: Literal["table"] = "table"
    in_bits: Optional[int] = None
    out_bits: int
    table: List[int]

    def to_function(self) -> TruthTable:
        in_bits = self.in_bits
        if in_bits is None:
            in_bits = max(len(self.table) - 1, 0).bit_length()
        return TruthTable(in_bits, self.out_bits, self.table)


class Gf2Doc(BaseModel):
    type: Literal["gf2"] = "gf2"
    rows: List[str]
    cols: Optional[int] = None

    def to_function(self) -> Gf2Matrix:
        return Gf2Matrix.from_bitstrings(self.rows, self.cols)


FunctionDoc = Annotated[Union[TableDoc, Gf2Doc], Field(discriminator="type")]


def function_to_doc(function: EdgeFunction) -> Union[TableDoc, Gf2Doc]:
    if isinstance(function, Gf2Matrix):
        return Gf2Doc(rows=function.to_bitstrings(), cols=function.cols)
    return TableDoc(in_bits=function.in_bits, out_bits=function.out_bits,
                    table=[int(v) for v in function.to_table()])


class CodeDocument(BaseModel):
    format: Literal["keycast-code/1"] = CODE_FORMAT
    blocklength: int = Field(ge=1)
    source_bits: Dict[str, int]
    edge_encoders: Dict[str, FunctionDoc]
    decoders: Dict[str, FunctionDoc]
    key: FunctionDoc
    message_coords: Optional[List[Tuple[str, int]]] = None

    @classmethod
    def from_code(cls, code: NetworkCode) -> "CodeDocument":
        return cls(
            blocklength=code.blocklength,
            source_bits=dict(code.source_bits),
            edge_encoders={e: function_to_doc(f) for e, f in code.edge_encoders.items()},
            decoders={d: function_to_doc(g) for d, g in code.decoders.items()},
            key=function_to_doc(code.key.function),
            message_coords=list(code.message_coords) if code.message_coords is not None else None,
        )

    def to_code(self) -> NetworkCode:
        return NetworkCode(
            blocklength=self.blocklength,
            source_bits=dict(self.source_bits),
            edge_encoders={e: f.to_function() for e, f in self.edge_encoders.items()},
            decoders={d: g.to_function() for d, g in self.decoders.items()},
            key=KeyMap(self.key.to_function()),
            message_coords=tuple(self.message_coords) if self.message_coords is not None else None,
        )


def instance_to_dict(instance: NetworkInstance) -> Dict[str, Any]:
    return InstanceDocument.from_instance(instance).model_dump(mode="json")


def code_to_dict(code: NetworkCode) -> Dict[str, Any]:
    return CodeDocument.from_code(code).model_dump(mode="json")


def instance_from_dict(data: Dict[str, Any]) -> NetworkInstance:
    return _parse(InstanceDocument, data).to_instance()


def code_from_dict(data: Dict[str, Any]) -> NetworkCode:
    return _parse(CodeDocument, data).to_code()


def _parse(model, data: Dict[str, Any]):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise KeycastError(ErrorCode.BAD_FORMAT, f"invalid {model.__name__}: {e.errors()[0]['msg']}",
                           location=[str(p) for p in e.errors()[0]["loc"]]) from e
    except KeycastError:
        raise
    except ValueError as e:
        raise KeycastError(ErrorCode.BAD_FORMAT, f"invalid {model.__name__}: {e}") from e


def dumps(document: Any) -> str:
    """Byte-stable JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class DocumentLoader:
    """Reads JSON documents from files (or stdin for '-') and dispatches on their format."""

    # Guardrail: document size limit
    MAX_FILE_SIZE_BYTES = 64 * 1024 * 1024  # 64 MB

    KNOWN_FORMATS = (INSTANCE_FORMAT, CODE_FORMAT, REPORT_FORMAT, SEARCH_FORMAT, CURSOR_FORMAT, PERMUTATION_FORMAT)

    @staticmethod
    def read_text(path: Union[str, Path]) -> str:
        if str(path) == "-":
            text = sys.stdin.read()
        else:
            path = Path(path)
            if not path.exists():
                raise KeycastError(ErrorCode.BAD_FORMAT, f"file not found: {path}")
            size = path.stat().st_size
            if size > DocumentLoader.MAX_FILE_SIZE_BYTES:
                raise KeycastError(
                    ErrorCode.BAD_FORMAT,
                    f"'{path}' exceeds maximum size. Size: {size / (1024 * 1024):.2f}MB, "
                    f"Limit: {DocumentLoader.MAX_FILE_SIZE_BYTES / (1024 * 1024):.0f}MB",
                )
            text = path.read_text(encoding="utf-8")
        if len(text.encode("utf-8")) > DocumentLoader.MAX_FILE_SIZE_BYTES:
            raise KeycastError(ErrorCode.BAD_FORMAT, "document exceeds maximum size")
        return text

    @staticmethod
    def load_json(path: Union[str, Path]) -> Dict[str, Any]:
        text = DocumentLoader.read_text(path)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise KeycastError(ErrorCode.BAD_FORMAT, f"'{path}' is not valid JSON: {e.msg} (line {e.lineno})") from e
        if not isinstance(data, dict):
            raise KeycastError(ErrorCode.BAD_FORMAT, f"'{path}' does not hold a JSON object")
        fmt = data.get("format")
        if fmt not in DocumentLoader.KNOWN_FORMATS:
            raise KeycastError(ErrorCode.BAD_FORMAT, f"unknown document format {fmt!r} in '{path}'")
        logger.debug("Loaded %s document from %s", fmt, path)
        return data

    @staticmethod
    def expect(data: Dict[str, Any], fmt: str, path: Union[str, Path]) -> Dict[str, Any]:
        if data.get("format") != fmt:
            raise KeycastError(ErrorCode.BAD_FORMAT, f"'{path}' holds {data.get('format')!r}, expected {fmt!r}")
        return data

    @classmethod
    def load(cls, path: Union[str, Path]) -> Any:
        """Parse a document into its object: NetworkInstance, NetworkCode, FeasibilityReport, or a raw dict."""
        data = cls.load_json(path)
        fmt = data["format"]
        if fmt == INSTANCE_FORMAT:
            return instance_from_dict(data)
        if fmt == CODE_FORMAT:
            return code_from_dict(data)
        if fmt == REPORT_FORMAT:
            return FeasibilityReport.from_dict(data)
        return data

    @classmethod
    def load_instance(cls, path: Union[str, Path]) -> NetworkInstance:
        return instance_from_dict(cls.expect(cls.load_json(path), INSTANCE_FORMAT, path))

    @classmethod
    def load_code(cls, path: Union[str, Path]) -> NetworkCode:
        return code_from_dict(cls.expect(cls.load_json(path), CODE_FORMAT, path))


def permutation_to_dict(table: List[int], bits: int) -> Dict[str, Any]:
    return {"format": PERMUTATION_FORMAT, "bits": bits, "table": [int(v) for v in table]}
