"""Study and series retrieval: find the images, then move them one by one."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..dicom import DataSet, Tag, uids
from ..net import (
    MoveDestinationUnknownError,
    associate,
    c_find,
    c_move,
    default_contexts,
)
from .filters import QueryFilters, SeriesFilters, build_identifier
from .stations import StationConfig
from .storesink import DEFAULT_STORE_AE

log = logging.getLogger(__name__)

TAG_SOP_INSTANCE = Tag(0x0008, 0x0018)
TAG_SERIES_UID = Tag(0x0020, 0x000E)


@dataclass(frozen=True)
class DestConfig:
    output_root: Path
    store_ae: str = DEFAULT_STORE_AE


@dataclass
class RetrieveReport:
    scope: str  # "study" | "series"
    study_uid: str
    series_uid: str | None
    expected: int = 0
    completed: int = 0
    failed: int = 0
    output_root: Path | None = None
    per_series: list[tuple[str, int]] = field(default_factory=list)
    error: str | None = None

    @property
    def success(self) -> bool:
        return self.failed == 0 and self.completed == self.expected > 0

    def to_document(self) -> dict:
        return {
            "scope": self.scope,
            "study_uid": self.study_uid,
            "series_uid": self.series_uid,
            "expected": self.expected,
            "completed": self.completed,
            "failed": self.failed,
            "success": self.success,
            "output_root": str(self.output_root) if self.output_root else None,
            "per_series": [{"series_uid": uid, "files_written": n}
                           for uid, n in self.per_series],
            "error": self.error,
        }


ProgressFn = Callable[[int, int], None]


def _count_files(output_root: Path, study_uid: str, series_uid: str) -> int:
    series_dir = output_root / study_uid / series_uid
    if not series_dir.is_dir():
        return 0
    return sum(1 for p in series_dir.glob("*.dcm") if p.is_file())


def _find_image_plan(station: StationConfig, study_uid: str,
                     series_uid: str | None, calling_ae: str,
                     connect_timeout: float, dimse_timeout: float,
                     ) -> list[tuple[str, str]]:
    """(series_uid, sop_uid) pairs for the requested scope, in PACS order."""
    filters = QueryFilters()
    if series_uid is not None:
        filters = QueryFilters(series=SeriesFilters(series_instance_uid=series_uid))
    assoc = associate(station.host, station.port,
                      called_ae=station.ae_title, calling_ae=calling_ae,
                      contexts=default_contexts(uids.STUDY_ROOT_QR_FIND),
                      connect_timeout=connect_timeout, dimse_timeout=dimse_timeout)
    try:
        series_rsps: list[DataSet] = []
        status = c_find(assoc,
                        build_identifier(filters, "SERIES", study_uid=study_uid),
                        series_rsps.append)
        if not status.is_success:
            raise RuntimeError(f"series lookup failed with status {status}")

        plan: list[tuple[str, str]] = []
        for rsp in series_rsps:
            uid = rsp.text(TAG_SERIES_UID)
            image_rsps: list[DataSet] = []
            status = c_find(assoc,
                            build_identifier(QueryFilters(), "IMAGE",
                                             study_uid=study_uid, series_uid=uid),
                            image_rsps.append)
            if not status.is_success:
                raise RuntimeError(f"image lookup failed with status {status}")
            plan.extend((uid, r.text(TAG_SOP_INSTANCE)) for r in image_rsps)
        return plan
    finally:
        assoc.release()


def _run_moves(station: StationConfig, study_uid: str,
               plan: list[tuple[str, str]], dest: DestConfig, calling_ae: str,
               connect_timeout: float, dimse_timeout: float,
               report: RetrieveReport, on_progress: ProgressFn | None) -> None:
    assoc = associate(station.host, station.port,
                      called_ae=station.ae_title, calling_ae=calling_ae,
                      contexts=default_contexts(uids.STUDY_ROOT_QR_MOVE),
                      connect_timeout=connect_timeout, dimse_timeout=dimse_timeout)
    try:
        for series_uid, sop_uid in plan:
            identifier = DataSet()
            identifier.set_text("QueryRetrieveLevel", "IMAGE")
            identifier.set_text("StudyInstanceUID", study_uid)
            identifier.set_text("SeriesInstanceUID", series_uid)
            identifier.set_text("SOPInstanceUID", sop_uid)
            try:
                outcome = c_move(assoc, identifier, dest.store_ae)
            except MoveDestinationUnknownError as exc:
                report.failed += 1
                report.error = str(exc)
                continue
            report.completed += outcome.completed
            if outcome.failed:
                report.failed += outcome.failed
            elif not outcome.is_success and not outcome.completed:
                report.failed += 1
            if on_progress is not None:
                on_progress(report.completed, report.expected)
    finally:
        assoc.release()


def _retrieve(station: StationConfig, study_uid: str, series_uid: str | None,
              dest: DestConfig, *, calling_ae: str, connect_timeout: float,
              dimse_timeout: float, on_progress: ProgressFn | None) -> RetrieveReport:
    scope = "series" if series_uid is not None else "study"
    report = RetrieveReport(scope=scope, study_uid=study_uid,
                            series_uid=series_uid,
                            output_root=Path(dest.output_root))
    try:
        plan = _find_image_plan(station, study_uid, series_uid, calling_ae,
                                connect_timeout, dimse_timeout)
    except Exception as exc:
        log.warning("retrieval lookup failed: %s", exc)
        report.error = f"lookup failed: {exc}"
        return report

    report.expected = len(plan)
    if on_progress is not None:
        on_progress(0, report.expected)
    if not plan:
        return report

    try:
        _run_moves(station, study_uid, plan, dest, calling_ae,
                   connect_timeout, dimse_timeout, report, on_progress)
    except Exception as exc:
        log.warning("retrieval moves failed: %s", exc)
        report.error = f"move failed: {exc}"
        remaining = report.expected - report.completed - report.failed
        report.failed += max(remaining, 0)

    series_uids = sorted({uid for uid, _ in plan})
    report.per_series = [
        (uid, _count_files(report.output_root, study_uid, uid))
        for uid in series_uids
    ]
    return report


def retrieve_study(station: StationConfig, study_uid: str, dest: DestConfig, *,
                   calling_ae: str = "BRIDGE", connect_timeout: float = 5.0,
                   dimse_timeout: float = 30.0,
                   on_progress: ProgressFn | None = None) -> RetrieveReport:
    """Pull every image of every series of a study to the local store."""
    return _retrieve(station, study_uid, None, dest, calling_ae=calling_ae,
                     connect_timeout=connect_timeout,
                     dimse_timeout=dimse_timeout, on_progress=on_progress)


def retrieve_series(station: StationConfig, study_uid: str, series_uid: str,
                    dest: DestConfig, *, calling_ae: str = "BRIDGE",
                    connect_timeout: float = 5.0, dimse_timeout: float = 30.0,
                    on_progress: ProgressFn | None = None) -> RetrieveReport:
    """Pull one series of a study to the local store."""
    return _retrieve(station, study_uid, series_uid, dest,
                     calling_ae=calling_ae, connect_timeout=connect_timeout,
                     dimse_timeout=dimse_timeout, on_progress=on_progress)
