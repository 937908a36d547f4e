# Local report archive
import pytest

from src.analysis import check
from src.constructions import fig1b_instance
from src.errors import ErrorCode, KeycastError
from src.search import CodeShape, max_feasible_rate
from src.storage import ReportStorage
from src.utils import instance_to_dict


@pytest.fixture
def storage(tmp_path):
    return ReportStorage(str(tmp_path / "archive"))


@pytest.fixture
def check_document(gap2_sum):
    instance, code = gap2_sum
    return check(instance, code, "key", 1).to_dict()


@pytest.fixture
def search_document():
    return max_feasible_rate(fig1b_instance(), "key", CodeShape.parse("free")).to_dict()


def test_new_archive_has_an_empty_index(storage):
    assert (storage.storage_dir / "index.json").read_text(encoding="utf-8") == "[]\n"
    assert storage.list() == []


def test_save_and_load(storage, check_document):
    record = storage.save("Gap sum code", check_document)
    assert record.kind == "check"
    assert record.overall == "pass"
    assert record.best_rate == "1/1"
    assert record.id.startswith("gap_sum_code_")
    assert record.timestamp is None
    assert storage.load(record.id) == check_document


def test_ids_are_deterministic(storage, check_document):
    first = storage.save("run", check_document)
    second = storage.save("run", check_document)
    assert first.id == second.id
    assert len(storage.list()) == 1


def test_search_documents(storage, search_document):
    record = storage.save("fig1b", search_document, timestamps=True)
    assert record.kind == "search"
    assert record.best_rate == "1/1"
    assert record.overall is None
    assert record.timestamp is not None


def test_only_reports_and_searches_are_archived(storage, gap2):
    with pytest.raises(KeycastError) as info:
        storage.save("instance", instance_to_dict(gap2))
    assert info.value.code is ErrorCode.BAD_FORMAT


def test_list_filters_and_limits(storage, check_document, search_document):
    storage.save("alpha check", check_document)
    storage.save("alpha search", search_document)
    storage.save("beta", check_document)
    assert [r.label for r in storage.list()] == ["alpha check", "alpha search", "beta"]
    assert [r.label for r in storage.list(label="ALPHA")] == ["alpha check", "alpha search"]
    assert len(storage.list(limit=1)) == 1


def test_delete(storage, check_document):
    record = storage.save("gone", check_document)
    assert storage.delete(record.id)
    assert storage.load(record.id) is None
    assert not storage.delete(record.id)


def test_stats(storage, check_document, search_document):
    storage.save("a", check_document)
    storage.save("b", search_document)
    stats = storage.stats()
    assert stats["total_reports"] == 2
    assert stats["kinds"] == {"check": 1, "search": 1}
    assert stats["passed_checks"] == 1
    assert stats["best_search_rate"] == "1/1"
    assert stats["total_size_bytes"] > 0


def test_corrupt_index_is_treated_as_empty(storage):
    (storage.storage_dir / "index.json").write_text("{oops", encoding="utf-8")
    assert storage.list() == []
