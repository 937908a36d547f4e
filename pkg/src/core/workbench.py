# Workbench: one entry point for checks, witness searches, rate searches and the report archive
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ..analysis import (
    CheckMode,
    FeasibilityReport,
    Verdict,
    check,
    check_key_feasibility,
    find_two_stage_witness,
    format_rate,
)
from ..coding import Coord, NetworkCode
from ..config import Settings, get_settings
from ..errors import ErrorCode, KeycastError
from ..model import NetworkInstance
from ..search import CodeShape, SearchCursor, SearchResult, max_feasible_rate
from ..storage import ReportRecord, ReportStorage
from ..utils.formats import DocumentLoader, dumps

logger = logging.getLogger(__name__)


class Workbench:
    """Runs workbench operations under the configured limits."""

    # Guardrails: hard ceilings on top of whatever the environment asks for
    MAX_ENUM_BITS = 30
    MAX_WITNESS_BITS = 24
    MAX_SEARCH_BITS = 20
    MAX_JOBS = 64

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self._storage: Optional[ReportStorage] = None
        logger.debug("Workbench ready (enum cap %d, search cap %d, budget %d)",
                     self.enum_cap, self.search_cap, self.settings.budget)

    @property
    def enum_cap(self) -> int:
        return min(self.settings.enum_cap, self.MAX_ENUM_BITS)

    @property
    def witness_cap(self) -> int:
        return min(self.settings.witness_cap, self.MAX_WITNESS_BITS)

    @property
    def search_cap(self) -> int:
        return min(self.settings.search_cap, self.MAX_SEARCH_BITS)

    @property
    def storage(self) -> ReportStorage:
        if self._storage is None:
            self._storage = ReportStorage(self.settings.report_dir)
        return self._storage

    def check(
        self,
        instance: NetworkInstance,
        code: NetworkCode,
        mode,
        rate,
        coords: Optional[Sequence[Coord]] = None,
    ) -> FeasibilityReport:
        """
        Feasibility check in any mode. For key2 without a witness the smallest
        M is searched first; when none exists witness_ok fails.
        """
        mode = CheckMode(mode)
        if mode is CheckMode.KEY2 and coords is None:
            coords = find_two_stage_witness(instance, code, rate, witness_cap=self.witness_cap)
            if coords is None:
                base = check_key_feasibility(instance, code, rate, enum_cap=self.enum_cap,
                                             chunk_bits=self.settings.chunk_bits)
                verdicts = dict(base.verdicts)
                verdicts["witness_ok"] = Verdict(False, detail="no set of source bits M satisfies both stages")
                logger.info("⚠ key2 check failed at R=%s: no two-stage witness", format_rate(base.rate))
                return replace(base, mode=CheckMode.KEY2, verdicts=verdicts)
        return check(instance, code, mode, rate, coords, enum_cap=self.enum_cap,
                     chunk_bits=self.settings.chunk_bits)

    def search(
        self,
        instance: NetworkInstance,
        mode,
        shape: CodeShape,
        budget: Optional[int] = None,
        start: int = 0,
        stop: Optional[int] = None,
        jobs: Optional[int] = None,
        cursor_path: Optional[str] = None,
    ) -> SearchResult:
        """Rate search; with `cursor_path` progress is written after every batch and resumed from it."""
        total = sum(shape.source_bits(instance).values())
        if total > self.search_cap:
            raise KeycastError(ErrorCode.SPACE_LIMIT, f"shape generates l={total} bits; search cap is {self.search_cap}",
                               bits=total, cap=self.search_cap)
        jobs = min(jobs or self.settings.jobs, self.MAX_JOBS)
        budget = budget or self.settings.budget

        cursor = None
        on_progress = None
        if cursor_path:
            path = Path(cursor_path)
            if path.exists():
                cursor = SearchCursor.from_dict(DocumentLoader.load_json(path))
                logger.info("Resuming search at candidate %d", cursor.next)
                if cursor.finished:
                    logger.info("✓ Cursor is already finished; rebuilding the result")

            def on_progress(state: SearchCursor) -> None:
                path.write_text(dumps(state.to_dict()), encoding="utf-8")

        result = max_feasible_rate(
            instance, mode, shape,
            budget=budget,
            key_budget=self.settings.key_budget,
            start=start,
            stop=stop,
            jobs=jobs,
            cursor=cursor,
            on_progress=on_progress,
        )
        if on_progress is not None:
            on_progress(result.cursor)
        return result

    def save_report(self, label: str, document: Dict[str, Any], timestamps: bool = False) -> ReportRecord:
        return self.storage.save(label, document, timestamps=timestamps)

    @staticmethod
    def document_summary(document: Dict[str, Any]) -> str:
        """One line for logs: the verdict of a report or the best rate of a search."""
        if "verdicts" in document:
            return f"{document.get('mode')} at R={document.get('rate')}: {document.get('overall')}"
        if "best_rate" in document:
            return f"{document.get('mode')} search: best rate {document.get('best_rate')}"
        return str(document.get("format"))
