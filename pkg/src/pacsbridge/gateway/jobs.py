"""Background retrieve jobs with live progress and per-node outcome memory."""

from __future__ import annotations

import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from ..engine import RetrieveReport

NodeKey = tuple[str, str, str | None]  # (station name, study uid, series uid)


@dataclass
class RetrieveJob:
    id: str
    scope: str  # "study" | "series"
    station_name: str
    study_uid: str
    series_uid: str | None
    state: str = "queued"  # queued -> running -> completed | failed
    progress: tuple[int, int] = (0, 0)
    report: RetrieveReport | None = None
    submitted_at: float = field(default_factory=time.time)
    finished_at: float | None = None

    def to_document(self) -> dict:
        return {
            "id": self.id,
            "scope": self.scope,
            "station": self.station_name,
            "study_uid": self.study_uid,
            "series_uid": self.series_uid,
            "state": self.state,
            "progress": {"completed": self.progress[0], "expected": self.progress[1]},
            "report": self.report.to_document() if self.report else None,
        }


class JobManager:
    """Bounded worker pool; duplicate submissions of an in-flight job are
    answered with the existing job id."""

    def __init__(self, runner: Callable[[RetrieveJob, Callable[[int, int], None]],
                                        RetrieveReport],
                 workers: int = 2):
        self._runner = runner
        self._pool = ThreadPoolExecutor(max_workers=workers,
                                        thread_name_prefix="retrieve-job")
        self._lock = threading.Lock()
        self._jobs: dict[str, RetrieveJob] = {}
        self._inflight: dict[NodeKey, str] = {}
        # Last terminal outcome per node: "succeeded" | "failed".
        self._outcomes: dict[NodeKey, str] = {}

    def submit(self, scope: str, station_name: str, study_uid: str,
               series_uid: str | None) -> str:
        key: NodeKey = (station_name, study_uid, series_uid)
        with self._lock:
            existing = self._inflight.get(key)
            if existing is not None:
                return existing
            job = RetrieveJob(uuid.uuid4().hex, scope, station_name,
                              study_uid, series_uid)
            self._jobs[job.id] = job
            self._inflight[key] = job.id
        self._pool.submit(self._run, job, key)
        return job.id

    def _run(self, job: RetrieveJob, key: NodeKey) -> None:
        with self._lock:
            job.state = "running"

        def on_progress(completed: int, expected: int) -> None:
            # Monotone by construction: the engine only ever adds.
            job.progress = (completed, expected)

        try:
            report = self._runner(job, on_progress)
            with self._lock:
                job.report = report
                job.progress = (report.completed, report.expected)
                job.state = "completed" if report.success else "failed"
        except Exception as exc:
            with self._lock:
                job.report = RetrieveReport(scope=job.scope, study_uid=job.study_uid,
                                            series_uid=job.series_uid,
                                            error=str(exc))
                job.state = "failed"
        finally:
            with self._lock:
                job.finished_at = time.time()
                self._inflight.pop(key, None)
                outcome = "succeeded" if job.state == "completed" else "failed"
                self._outcomes[key] = outcome
                if outcome == "succeeded" and job.report is not None:
                    # A whole-study success also covers its series nodes.
                    for series_uid, _count in job.report.per_series:
                        series_key = (key[0], key[1], series_uid)
                        self._outcomes[series_key] = "succeeded"

    def get(self, job_id: str) -> RetrieveJob | None:
        with self._lock:
            return self._jobs.get(job_id)

    def node_state(self, station_name: str, study_uid: str,
                   series_uid: str | None) -> str | None:
        """'running', 'succeeded', 'failed' or None for untouched nodes."""
        key: NodeKey = (station_name, study_uid, series_uid)
        with self._lock:
            if key in self._inflight:
                return "running"
            return self._outcomes.get(key)

    def stop(self) -> None:
        self._pool.shutdown(wait=True, cancel_futures=True)
