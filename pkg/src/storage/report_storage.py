# Report Storage - local JSON archive of feasibility reports and search results
import hashlib
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from ..analysis import REPORT_FORMAT, format_rate, parse_rate
from ..errors import ErrorCode, KeycastError
from ..search import SEARCH_FORMAT
from ..utils.formats import dumps

logger = logging.getLogger(__name__)

KINDS = {REPORT_FORMAT: "check", SEARCH_FORMAT: "search"}


class ReportRecord(BaseModel):
    id: str
    label: str
    kind: str
    overall: Optional[str] = None
    best_rate: Optional[str] = None
    filename: str
    timestamp: Optional[str] = None


class ReportStorage:
    """Manages local storage of check reports and search results."""

    def __init__(self, storage_dir: str = "data/reports"):
        self.storage_dir = Path(storage_dir)
        self.storage_dir.mkdir(parents=True, exist_ok=True)
        self.index_file = self.storage_dir / "index.json"
        if not self.index_file.exists():
            self._save_index([])

    def _load_index(self) -> List[Dict[str, Any]]:
        try:
            with open(self.index_file, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("⚠ Could not read report index %s: %s", self.index_file, e)
            return []

    def _save_index(self, index: List[Dict[str, Any]]):
        index.sort(key=lambda record: record["id"])
        self.index_file.write_text(dumps(index), encoding='utf-8')

    @staticmethod
    def _sanitize_label(label: str) -> str:
        safe = "".join(c if c.isalnum() or c in (' ', '-', '_') else '_' for c in label)
        return safe.strip().replace(' ', '_').lower() or "report"

    def report_id(self, label: str, document: Dict[str, Any]) -> str:
        """Sanitised label plus a short hash of the document; the same input always gets the same id."""
        digest = hashlib.sha256(dumps(document).encode("utf-8")).hexdigest()[:12]
        return f"{self._sanitize_label(label)}_{digest}"

    def save(self, label: str, document: Dict[str, Any], timestamps: bool = False) -> ReportRecord:
        kind = KINDS.get(document.get("format"))
        if kind is None:
            raise KeycastError(ErrorCode.BAD_FORMAT,
                               f"only {REPORT_FORMAT} and {SEARCH_FORMAT} documents can be archived")
        report_id = self.report_id(label, document)
        record = ReportRecord(
            id=report_id,
            label=label,
            kind=kind,
            overall=document.get("overall"),
            best_rate=document.get("best_rate") if kind == "search" else document.get("rate"),
            filename=f"{report_id}.json",
            timestamp=datetime.now().isoformat() if timestamps else None,
        )
        entry = record.model_dump()
        (self.storage_dir / record.filename).write_text(
            dumps({"record": entry, "document": document}), encoding='utf-8')

        index = [r for r in self._load_index() if r["id"] != report_id]
        index.append(entry)
        self._save_index(index)
        logger.info("✓ Report saved: %s", report_id)
        return record

    def load(self, report_id: str) -> Optional[Dict[str, Any]]:
        filepath = self.storage_dir / f"{report_id}.json"
        if not filepath.exists():
            logger.warning("⚠ Report not found: %s", report_id)
            return None
        with open(filepath, 'r', encoding='utf-8') as f:
            return json.load(f).get("document")

    def delete(self, report_id: str) -> bool:
        filepath = self.storage_dir / f"{report_id}.json"
        index = self._load_index()
        remaining = [r for r in index if r["id"] != report_id]
        if not filepath.exists() and len(remaining) == len(index):
            logger.warning("⚠ Report not found: %s", report_id)
            return False
        if filepath.exists():
            filepath.unlink()
        self._save_index(remaining)
        logger.info("✓ Report deleted: %s", report_id)
        return True

    def list(self, label: Optional[str] = None, limit: Optional[int] = None) -> List[ReportRecord]:
        """Records sorted by id, optionally filtered by a case-insensitive label substring."""
        index = self._load_index()
        if label:
            needle = label.lower()
            index = [r for r in index if needle in r["label"].lower()]
        if limit:
            index = index[:limit]
        return [ReportRecord.model_validate(r) for r in index]

    def stats(self) -> Dict[str, Any]:
        index = self._load_index()
        total_size = sum(
            (self.storage_dir / r["filename"]).stat().st_size
            for r in index if (self.storage_dir / r["filename"]).exists()
        )
        kinds: Dict[str, int] = {}
        for record in index:
            kinds[record["kind"]] = kinds.get(record["kind"], 0) + 1
        best = [r["best_rate"] for r in index if r["kind"] == "search" and r.get("best_rate")]
        return {
            "total_reports": len(index),
            "storage_path": str(self.storage_dir),
            "total_size_bytes": total_size,
            "labels": len({r["label"] for r in index}),
            "kinds": kinds,
            "passed_checks": sum(1 for r in index if r.get("overall") == "pass"),
            "best_search_rate": format_rate(max(parse_rate(b) for b in best)) if best else None,
        }