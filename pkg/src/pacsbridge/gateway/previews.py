"""On-demand preview exports, cached by series directory content hash."""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from threading import Lock

from ..preview import PreviewError, export_series

log = logging.getLogger(__name__)


class NotRetrievedError(Exception):
    """Nothing on disk for the requested scope."""


def _series_digest(series_dir: Path) -> str:
    digest = hashlib.sha256()
    for path in sorted(series_dir.glob("*.dcm")):
        digest.update(path.name.encode())
        digest.update(hashlib.sha256(path.read_bytes()).digest())
    return digest.hexdigest()[:16]


class PreviewManager:
    def __init__(self, output_root: Path, cache_root: Path):
        self.output_root = Path(output_root)
        self.cache_root = Path(cache_root)
        self._lock = Lock()

    def study_manifest(self, study_uid: str) -> dict:
        study_dir = self.output_root / study_uid
        if not study_dir.is_dir():
            raise NotRetrievedError(f"study {study_uid} has not been retrieved")
        series_uids = sorted(p.name for p in study_dir.iterdir() if p.is_dir())
        manifests = [self.series_manifest(study_uid, uid) for uid in series_uids]
        if not manifests:
            raise NotRetrievedError(f"study {study_uid} has no stored series")
        return {"study_uid": study_uid, "series": manifests}

    def series_manifest(self, study_uid: str, series_uid: str) -> dict:
        series_dir = self.output_root / study_uid / series_uid
        if not series_dir.is_dir() or not any(series_dir.glob("*.dcm")):
            raise NotRetrievedError(
                f"series {series_uid} of study {study_uid} has not been retrieved")
        with self._lock:
            digest = _series_digest(series_dir)
            cache_dir = self.cache_root / study_uid / series_uid / digest
            manifest_path = cache_dir / "manifest.json"
            if manifest_path.exists():
                manifest = json.loads(manifest_path.read_text())
            else:
                manifest = export_series(series_dir, cache_dir)
                manifest_path.write_text(json.dumps(manifest, indent=2))
                log.info("exported previews for %s/%s -> %s",
                         study_uid, series_uid, cache_dir)
        manifest = dict(manifest)
        manifest["study_uid"] = study_uid
        manifest["series_uid"] = series_uid
        manifest["cache_key"] = digest
        return manifest

    def image_path(self, study_uid: str, series_uid: str, name: str) -> Path:
        if "/" in name or "\\" in name or name.startswith("."):
            raise PreviewError(f"bad image name {name!r}")
        manifest = self.series_manifest(study_uid, series_uid)
        cache_dir = (self.cache_root / study_uid / series_uid /
                     manifest["cache_key"])
        path = cache_dir / name
        if not path.is_file():
            raise NotRetrievedError(f"no preview image {name!r}")
        return path
