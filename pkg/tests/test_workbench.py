# Workbench: settings, guardrails, key2 witness lookup, resumable searches
import json

import pytest

from src.analysis import CheckMode
from src.config import Settings, get_settings, reset_settings
from src.constructions import fig1b_instance
from src.core.workbench import Workbench
from src.errors import ErrorCode, KeycastError
from src.search import CodeShape

FREE = CodeShape.parse("free")


def test_settings_come_from_the_environment(monkeypatch):
    monkeypatch.setenv("KEYCAST_ENUM_CAP", "12")
    monkeypatch.setenv("KEYCAST_JOBS", "3")
    reset_settings()
    settings = get_settings()
    assert settings.enum_cap == 12
    assert settings.jobs == 3
    assert settings.budget == 10_000_000


def test_invalid_settings_are_rejected(monkeypatch):
    monkeypatch.setenv("KEYCAST_CHUNK_BITS", "0")
    reset_settings()
    with pytest.raises(ValueError):
        get_settings()


def test_guardrails_cap_the_settings():
    bench = Workbench(Settings(enum_cap=30, witness_cap=30, search_cap=30))
    assert bench.enum_cap == Workbench.MAX_ENUM_BITS
    assert bench.witness_cap == Workbench.MAX_WITNESS_BITS
    assert bench.search_cap == Workbench.MAX_SEARCH_BITS


def test_key2_check_finds_its_own_witness(gap2_two_stage):
    report = Workbench().check(*gap2_two_stage, "key2", "1/2")
    assert report.overall
    assert report.coords == [("s1", 0), ("s2", 0), ("s3", 0)]


def test_key2_check_without_any_witness(relay):
    report = Workbench().check(*relay, "key2", 1)
    assert report.mode is CheckMode.KEY2
    assert report.failed() == ["witness_ok"]
    assert report.to_dict()["verdicts"]["witness_ok"]["applicable"] is True


def test_search_respects_the_configured_cap(monkeypatch, gap2):
    monkeypatch.setenv("KEYCAST_SEARCH_CAP", "2")
    reset_settings()
    with pytest.raises(KeycastError) as info:
        Workbench().search(gap2, "key", CodeShape())
    assert info.value.code is ErrorCode.SPACE_LIMIT


def test_search_writes_and_resumes_a_cursor(tmp_path):
    path = tmp_path / "cursor.json"
    bench = Workbench()
    first = bench.search(fig1b_instance(), "key", FREE, cursor_path=str(path))
    cursor = json.loads(path.read_text(encoding="utf-8"))
    assert cursor["format"] == "keycast-cursor/1"
    assert cursor["finished"] is True
    assert cursor["next"] == 16

    again = bench.search(fig1b_instance(), "key", FREE, cursor_path=str(path))
    assert again.to_dict() == first.to_dict()


def test_reports_are_archived_under_the_configured_directory(tmp_path, gap2_sum):
    bench = Workbench()
    document = bench.check(*gap2_sum, "key", 1).to_dict()
    record = bench.save_report("sum", document)
    assert (tmp_path / "reports" / record.filename).exists()
    assert Workbench.document_summary(document) == "key at R=1/1: pass"
