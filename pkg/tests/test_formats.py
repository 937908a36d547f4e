# Versioned JSON documents and the document loader
import io
import json

import pytest

from src.analysis import check
from src.coding import TruthTable
from src.constructions import random_secure_code
from src.errors import ErrorCode, KeycastError
from src.utils import (
    CODE_FORMAT,
    INSTANCE_FORMAT,
    DocumentLoader,
    code_from_dict,
    code_to_dict,
    dumps,
    instance_from_dict,
    instance_to_dict,
    permutation_to_dict,
)


def _write(tmp_path, name, document):
    path = tmp_path / name
    path.write_text(document if isinstance(document, str) else dumps(document), encoding="utf-8")
    return path


class TestDocuments:
    def test_instance_document(self, gap2):
        document = instance_to_dict(gap2)
        assert document["format"] == INSTANCE_FORMAT
        assert document["edges"][0] == {"id": "s1>u1", "tail": "s1", "head": "u1", "capacity": {"num": 1, "den": 1}}
        restored = instance_from_dict(json.loads(dumps(document)))
        assert restored == gap2
        assert restored.params == {"alpha": 2, "r": 3, "mode": "EDGE_SETS"}

    def test_code_document(self, gap2_sum):
        _, code = gap2_sum
        document = code_to_dict(code)
        assert document["format"] == CODE_FORMAT
        assert document["key"] == {"type": "gf2", "rows": ["111"], "cols": 3}
        assert code_from_dict(json.loads(dumps(document))) == code

    def test_message_coordinates_survive(self, rng):
        _, code, coords = random_secure_code(rng)
        restored = code_from_dict(json.loads(dumps(code_to_dict(code))))
        assert list(restored.message_coords) == coords

    def test_table_width_is_inferred(self):
        document = {"format": CODE_FORMAT, "blocklength": 1, "source_bits": {"s": 2},
                    "edge_encoders": {"s>v": {"type": "table", "out_bits": 1, "table": [0, 1, 1, 0]}},
                    "decoders": {}, "key": {"type": "table", "out_bits": 1, "table": [0, 1, 1, 0]}}
        code = code_from_dict(document)
        assert code.edge_encoders["s>v"] == TruthTable(2, 1, [0, 1, 1, 0])

    @pytest.mark.parametrize("patch", [
        {"nodes": None},
        {"edges": [{"id": "a>b", "tail": "a", "head": "b", "capacity": {"num": 1, "den": 0}}]},
        {"sources": [{"node": "s1", "role": "oracle"}]},
        {"format": "keycast-instance/2"},
    ])
    def test_invalid_instances(self, gap2, patch):
        document = {**instance_to_dict(gap2), **patch}
        with pytest.raises(KeycastError) as info:
            instance_from_dict(document)
        assert info.value.code is ErrorCode.BAD_FORMAT

    def test_invalid_function_documents(self, gap2_sum):
        _, code = gap2_sum
        document = code_to_dict(code)
        document["key"] = {"type": "polynomial", "terms": []}
        with pytest.raises(KeycastError) as info:
            code_from_dict(document)
        assert info.value.code is ErrorCode.BAD_FORMAT
        document["key"] = {"type": "table", "in_bits": 3, "out_bits": 1, "table": [0, 1]}
        with pytest.raises(KeycastError) as info:
            code_from_dict(document)
        assert info.value.code is ErrorCode.WIDTH_MISMATCH

    def test_dumps_is_byte_stable(self):
        assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'

    def test_permutation_document(self):
        assert permutation_to_dict([0, 3, 1, 2], 2) == {
            "format": "keycast-permutation/1", "bits": 2, "table": [0, 3, 1, 2]}


class TestDocumentLoader:
    def test_load_dispatches_on_format(self, tmp_path, gap2_sum):
        instance, code = gap2_sum
        report = check(instance, code, "key", 1)
        assert DocumentLoader.load(_write(tmp_path, "i.json", instance_to_dict(instance))) == instance
        assert DocumentLoader.load(_write(tmp_path, "c.json", code_to_dict(code))) == code
        loaded = DocumentLoader.load(_write(tmp_path, "r.json", report.to_dict()))
        assert loaded.to_dict() == report.to_dict()
        perm = DocumentLoader.load(_write(tmp_path, "p.json", permutation_to_dict([1, 0], 1)))
        assert perm["table"] == [1, 0]

    def test_expected_format(self, tmp_path, gap2):
        path = _write(tmp_path, "i.json", instance_to_dict(gap2))
        with pytest.raises(KeycastError) as info:
            DocumentLoader.load_code(path)
        assert info.value.code is ErrorCode.BAD_FORMAT

    @pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"format": "other/1"}'])
    def test_rejected_files(self, tmp_path, content):
        with pytest.raises(KeycastError) as info:
            DocumentLoader.load_json(_write(tmp_path, "bad.json", content))
        assert info.value.code is ErrorCode.BAD_FORMAT

    def test_missing_file(self, tmp_path):
        with pytest.raises(KeycastError) as info:
            DocumentLoader.load_json(tmp_path / "absent.json")
        assert info.value.code is ErrorCode.BAD_FORMAT

    def test_size_guardrail(self, tmp_path, monkeypatch):
        monkeypatch.setattr(DocumentLoader, "MAX_FILE_SIZE_BYTES", 8)
        with pytest.raises(KeycastError) as info:
            DocumentLoader.read_text(_write(tmp_path, "big.json", '{"format": "x"}'))
        assert "exceeds maximum size" in info.value.message

    def test_stdin(self, monkeypatch, gap2):
        monkeypatch.setattr("sys.stdin", io.StringIO(dumps(instance_to_dict(gap2))))
        assert DocumentLoader.load_instance("-") == gap2
