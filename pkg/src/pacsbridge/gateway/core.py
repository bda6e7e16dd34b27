"""The gateway: engine wiring, session checks and job plumbing in one place.

Both the HTTP service and the CLI drive this object; neither talks to the
engine directly.
"""

from __future__ import annotations

import logging
import os
import sys
from pathlib import Path

from ..dicom import Tag, dictionary
from ..engine import (
    DEFAULT_STORE_AE,
    DEFAULT_STORE_PORT,
    DestConfig,
    QueryFilters,
    ResultTree,
    StationConfig,
    StationStatus,
    echo_all,
    query_stations,
    retrieve_series,
    retrieve_study,
    start_store_sink,
)
from .auth import (
    AuthError,
    AuthorizationError,
    Session,
    SessionStore,
    UserRecord,
    UserStore,
)
from .jobs import JobManager, RetrieveJob
from .previews import PreviewManager
from .settings import Preferences, SettingsStore

log = logging.getLogger(__name__)

ENV_ADMIN_PASSWORD = "BRIDGE_ADMIN_PASSWORD"
ENV_DATA_DIR = "BRIDGE_DATA_DIR"
ENV_STORE_AE = "BRIDGE_STORE_AE"
ENV_STORE_PORT = "BRIDGE_STORE_PORT"

DEFAULT_DATA_DIR = "~/.pacsbridge"


def default_data_dir() -> Path:
    return Path(os.environ.get(ENV_DATA_DIR, DEFAULT_DATA_DIR)).expanduser()


def resolve_tag(text: str) -> Tag:
    """Accept "(GGGG,EEEE)", "GGGG,EEEE" or a dictionary keyword."""
    try:
        return Tag.parse(text)
    except ValueError:
        pass
    entry = dictionary.lookup(text)
    if entry is None:
        raise ValueError(f"unknown tag or keyword: {text!r}")
    return entry.tag


class UnknownStationError(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no station named {name!r}")


class Gateway:
    def __init__(self, data_dir: Path | str | None = None, *,
                 store_host: str = "127.0.0.1",
                 store_ae: str | None = None,
                 store_port: int | None = None,
                 admin_password: str | None = None,
                 job_workers: int = 2,
                 calling_ae: str = "BRIDGE"):
        self.data_dir = Path(data_dir) if data_dir else default_data_dir()
        self.data_dir.mkdir(parents=True, exist_ok=True)

        self.users = UserStore(self.data_dir / "users.json")
        generated = self.users.ensure_admin(
            admin_password or os.environ.get(ENV_ADMIN_PASSWORD))
        if generated:
            # Printed exactly once, on first run without a configured secret.
            # Goes to stderr so piped stdout (e.g. query JSON) stays clean.
            print(f"created admin user with password: {generated}",
                  file=sys.stderr, flush=True)

        self.sessions = SessionStore()
        self.settings = SettingsStore(self.data_dir / "settings.json",
                                      default_output_root=self.data_dir / "retrieved")
        self.store_host = store_host
        self.store_ae = store_ae or os.environ.get(ENV_STORE_AE, DEFAULT_STORE_AE)
        env_port = os.environ.get(ENV_STORE_PORT)
        self.store_port = (store_port if store_port is not None
                           else int(env_port) if env_port else DEFAULT_STORE_PORT)
        self.calling_ae = calling_ae
        self.jobs = JobManager(self._run_job, workers=job_workers)
        self.previews = PreviewManager(self.output_root,
                                       self.data_dir / "preview-cache")
        self._sink = None

    # -- lifecycle

    def start(self) -> None:
        if self._sink is None:
            self._sink = start_store_sink(
                self.output_root, host=self.store_host, port=self.store_port,
                ae_title=self.store_ae,
                dimse_timeout=self.preferences.dimse_timeout_s)
            log.info("store service %s listening on %s:%s",
                     self.store_ae, self._sink.host, self._sink.port)

    def stop(self) -> None:
        self.jobs.stop()
        if self._sink is not None:
            self._sink.stop()
            self._sink = None

    def __enter__(self) -> "Gateway":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.stop()

    @property
    def bound_store_port(self) -> int:
        return self._sink.port if self._sink else self.store_port

    @property
    def preferences(self) -> Preferences:
        return self.settings.preferences()

    @property
    def output_root(self) -> Path:
        return Path(self.settings.preferences().output_root)

    # -- auth

    def login(self, username: str, password: str) -> Session:
        record = self.users.verify(username, password)
        return self.sessions.issue(record)

    def require_session(self, token: str | None) -> Session:
        session = self.sessions.resolve(token)
        if session is None:
            raise AuthError()
        return session

    def create_user(self, session: Session, username: str, password: str,
                    role: str = "user") -> UserRecord:
        if session.role != "admin":
            raise AuthorizationError("only the admin may register users")
        return self.users.create(username, password, role)

    # -- stations and preferences

    def add_station(self, station: StationConfig) -> None:
        self.settings.add_station(station)

    def remove_station(self, name: str) -> bool:
        return self.settings.remove_station(name)

    def stations(self) -> list[StationConfig]:
        return self.settings.stations()

    def verify_stations(self, name: str | None = None) -> list[StationStatus]:
        prefs = self.preferences
        targets = self.settings.stations()
        if name and name != "all":
            station = self.settings.find_station(name)
            if station is None:
                raise UnknownStationError(name)
            targets = [station]
        return echo_all(targets, calling_ae=self.calling_ae,
                        connect_timeout=prefs.connect_timeout_s,
                        dimse_timeout=prefs.dimse_timeout_s)

    def set_preferences(self, prefs: Preferences) -> None:
        self.settings.set_preferences(prefs)
        self.previews.output_root = self.output_root
        if self._sink is not None:
            self._sink.output_root = self.output_root

    # -- query and retrieve

    def _targets(self, station: str | None) -> list[StationConfig]:
        if station and station != "all":
            found = self.settings.find_station(station)
            if found is None:
                raise UnknownStationError(station)
            return [found]
        return self.settings.stations()

    def query(self, station: str | None, filters: QueryFilters, *,
              exact_match_override: bool | None = None) -> ResultTree:
        prefs = self.preferences
        targets = self._targets(station)
        if not targets:
            raise ValueError("no stations configured")
        exact = (prefs.exact_match if exact_match_override is None
                 else exact_match_override)
        tree = query_stations(targets, filters,
                              exact_match=exact,
                              calling_ae=self.calling_ae,
                              connect_timeout=prefs.connect_timeout_s,
                              dimse_timeout=prefs.dimse_timeout_s)
        self._overlay_actions(tree)
        return tree

    def _overlay_actions(self, tree: ResultTree) -> None:
        for study in tree.studies:
            station = study.station.name
            self._apply_node_state(study.actions, station,
                                   study.study_instance_uid, None)
            for series in study.series:
                self._apply_node_state(series.actions, station,
                                       study.study_instance_uid,
                                       series.series_instance_uid)

    def _apply_node_state(self, actions, station: str, study_uid: str,
                          series_uid: str | None) -> None:
        state = self.jobs.node_state(station, study_uid, series_uid)
        if state == "running":
            actions.retrieve_enabled = False
        elif state == "succeeded":
            actions.retrieve_enabled = False
            actions.preview_enabled = True
            actions.open_enabled = True
        elif state == "failed":
            actions.retrieve_enabled = True
            actions.failed_mark = True

    def submit_retrieve(self, scope: str, station: str, study_uid: str,
                        series_uid: str | None = None) -> str:
        if scope not in ("study", "series"):
            raise ValueError(f"scope must be study or series, not {scope!r}")
        if scope == "series" and not series_uid:
            raise ValueError("series scope requires series_uid")
        if self.settings.find_station(station) is None:
            raise UnknownStationError(station)
        if not study_uid:
            raise ValueError("study_uid must not be empty")
        self.start()  # the store service must be live before any move
        return self.jobs.submit(scope, station, study_uid,
                                series_uid if scope == "series" else None)

    def job(self, job_id: str) -> RetrieveJob | None:
        return self.jobs.get(job_id)

    def _run_job(self, job: RetrieveJob, on_progress) -> object:
        station = self.settings.find_station(job.station_name)
        if station is None:
            raise UnknownStationError(job.station_name)
        prefs = self.preferences
        dest = DestConfig(output_root=self.output_root, store_ae=self.store_ae)
        kwargs = dict(calling_ae=self.calling_ae,
                      connect_timeout=prefs.connect_timeout_s,
                      dimse_timeout=prefs.dimse_timeout_s,
                      on_progress=on_progress)
        if job.scope == "study":
            return retrieve_study(station, job.study_uid, dest, **kwargs)
        return retrieve_series(station, job.study_uid, job.series_uid, dest,
                               **kwargs)
