"""Remote station configuration and concurrent reachability checks."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..dicom import uids
from ..net import associate, c_echo, default_contexts


@dataclass(frozen=True)
class StationConfig:
    name: str
    ae_title: str
    host: str
    port: int

    def __post_init__(self):
        if not self.name.strip():
            raise ValueError("station name must not be empty")
        if not 0 < len(self.ae_title.strip()) <= 16:
            raise ValueError(f"AE title must be 1..16 characters: {self.ae_title!r}")
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port out of range: {self.port}")
        if not self.host.strip():
            raise ValueError("host must not be empty")

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.ae_title, self.host, self.port)


@dataclass(frozen=True)
class StationStatus:
    station: StationConfig
    reachable: bool
    checked_at: float
    latency: float | None = None
    detail: str = ""


def _probe(station: StationConfig, calling_ae: str, connect_timeout: float,
           dimse_timeout: float) -> StationStatus:
    started = time.monotonic()
    checked_at = time.time()
    try:
        assoc = associate(
            station.host, station.port,
            called_ae=station.ae_title, calling_ae=calling_ae,
            contexts=default_contexts(uids.VERIFICATION),
            connect_timeout=connect_timeout, dimse_timeout=dimse_timeout)
    except Exception as exc:
        return StationStatus(station, False, checked_at, detail=str(exc))
    try:
        status = c_echo(assoc)
    except Exception as exc:
        assoc.abort()
        return StationStatus(station, False, checked_at, detail=str(exc))
    assoc.release()
    latency = time.monotonic() - started
    if not status.is_success:
        return StationStatus(station, False, checked_at,
                             detail=f"echo status {status}")
    return StationStatus(station, True, checked_at, latency=latency)


def echo_all(stations: list[StationConfig], *, calling_ae: str = "BRIDGE",
             connect_timeout: float = 5.0,
             dimse_timeout: float = 30.0) -> list[StationStatus]:
    """Probe every station concurrently; order matches the input."""
    if not stations:
        return []
    with ThreadPoolExecutor(max_workers=len(stations)) as pool:
        futures = [pool.submit(_probe, s, calling_ae, connect_timeout,
                               dimse_timeout) for s in stations]
        return [f.result() for f in futures]
