"""Persisted stations and preferences: one human-readable settings document."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from threading import Lock

from ..engine import StationConfig
from .auth import ConflictError


@dataclass(frozen=True)
class Preferences:
    exact_match: bool = False
    connect_timeout_s: int = 5
    dimse_timeout_s: int = 30
    output_root: str = ""

    def validate(self) -> None:
        if self.connect_timeout_s <= 0 or self.dimse_timeout_s <= 0:
            raise ValueError("timeouts must be positive")
        if not self.output_root:
            raise ValueError("output root must be set")
        root = Path(self.output_root)
        try:
            root.mkdir(parents=True, exist_ok=True)
            probe = root / ".write_probe"
            probe.touch()
            probe.unlink()
        except OSError as exc:
            raise ValueError(f"output root is not writable: {exc}") from exc


class SettingsStore:
    """Stations plus preferences, written atomically on every change."""

    def __init__(self, path: Path, default_output_root: Path):
        self._path = Path(path)
        self._lock = Lock()
        self._stations: list[StationConfig] = []
        self._preferences = Preferences(output_root=str(default_output_root))
        self._load()

    def _load(self) -> None:
        if not self._path.exists():
            return
        doc = json.loads(self._path.read_text())
        self._stations = [StationConfig(s["name"], s["ae_title"], s["host"],
                                        int(s["port"]))
                          for s in doc.get("stations", [])]
        prefs = doc.get("preferences", {})
        self._preferences = replace(self._preferences, **prefs)

    def _save(self) -> None:
        doc = {
            "stations": [vars(s) for s in self._stations],
            "preferences": vars(self._preferences),
        }
        payload = json.dumps(doc, indent=2)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=self._path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as tmp:
                tmp.write(payload)
            os.replace(tmp_name, self._path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    # -- stations

    def stations(self) -> list[StationConfig]:
        with self._lock:
            return list(self._stations)

    def find_station(self, name: str) -> StationConfig | None:
        with self._lock:
            for station in self._stations:
                if station.name == name:
                    return station
        return None

    def add_station(self, station: StationConfig) -> None:
        with self._lock:
            for existing in self._stations:
                if existing.key == station.key:
                    raise ConflictError(
                        f"station {station.ae_title}@{station.host}:{station.port} "
                        "already configured")
                if existing.name == station.name:
                    raise ConflictError(f"station name {station.name!r} already used")
            self._stations.append(station)
            self._save()

    def remove_station(self, name: str) -> bool:
        with self._lock:
            kept = [s for s in self._stations if s.name != name]
            removed = len(kept) != len(self._stations)
            if removed:
                self._stations = kept
                self._save()
            return removed

    # -- preferences

    def preferences(self) -> Preferences:
        with self._lock:
            return self._preferences

    def set_preferences(self, prefs: Preferences) -> None:
        prefs.validate()
        with self._lock:
            self._preferences = prefs
            self._save()
