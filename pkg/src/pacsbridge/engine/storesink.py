"""Local Store SCP that writes incoming instances as Part 10 files."""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Callable

from ..dicom import DataSet, FileMeta, Tag, write_part10_file
from ..net import Handlers, ScpContext, ScpHandle, serve
from ..net import messages as m

log = logging.getLogger(__name__)

TAG_SOP_CLASS = Tag(0x0008, 0x0016)
TAG_SOP_INSTANCE = Tag(0x0008, 0x0018)
TAG_SERIES_UID = Tag(0x0020, 0x000E)
TAG_STUDY_UID = Tag(0x0020, 0x000D)

DEFAULT_STORE_AE = "BRIDGE_STORE"
DEFAULT_STORE_PORT = 11113


def instance_path(output_root: Path, study_uid: str, series_uid: str,
                  sop_uid: str) -> Path:
    return output_root / study_uid / series_uid / f"{sop_uid}.dcm"


class StoreSink:
    """Running Store SCP bound to an output directory."""

    def __init__(self, scp: ScpHandle, output_root: Path):
        self._scp = scp
        self.output_root = output_root

    @property
    def host(self) -> str:
        return self._scp.host

    @property
    def port(self) -> int:
        return self._scp.port

    @property
    def ae_title(self) -> str:
        return self._scp.local_ae

    def stop(self) -> None:
        self._scp.stop()

    def __enter__(self) -> "StoreSink":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()


def store_instance(output_root: Path, ctx: ScpContext, ds: DataSet) -> tuple[int, Path | None]:
    """Write one incoming instance; returns (status, path or None)."""
    study = ds.text(TAG_STUDY_UID)
    series = ds.text(TAG_SERIES_UID)
    sop = ds.text(TAG_SOP_INSTANCE)
    if not (study and series and sop):
        log.warning("rejecting store without full UID hierarchy "
                    "(study=%r series=%r sop=%r)", study, series, sop)
        return m.STATUS_UNABLE_TO_PROCESS, None

    sop_class = ctx.command.text(m.TAG_AFFECTED_SOP_CLASS) or ds.text(TAG_SOP_CLASS)
    meta = FileMeta(
        transfer_syntax_uid=ctx.transfer_syntax,
        media_storage_sop_class_uid=sop_class,
        media_storage_sop_instance_uid=sop,
    )
    path = instance_path(output_root, study, series, sop)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        blob = write_part10_file(meta, ds)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".part")
        try:
            with os.fdopen(fd, "wb") as tmp:
                tmp.write(blob)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    except OSError as exc:
        log.error("cannot write %s: %s", path, exc)
        return m.STATUS_OUT_OF_RESOURCES, None
    return m.STATUS_SUCCESS, path


def start_store_sink(output_root: Path | str, *, host: str = "127.0.0.1",
                     port: int = 0, ae_title: str = DEFAULT_STORE_AE,
                     on_stored: Callable[[Path], None] | None = None,
                     dimse_timeout: float = 30.0) -> StoreSink:
    output_root = Path(output_root)
    output_root.mkdir(parents=True, exist_ok=True)
    sink: StoreSink | None = None

    # Reads sink.output_root per request so the target directory can be
    # repointed (preference change) without restarting the listener.
    def on_store(ctx: ScpContext, ds: DataSet) -> int:
        status, path = store_instance(sink.output_root, ctx, ds)
        if path is not None and on_stored is not None:
            on_stored(path)
        return status

    handlers = Handlers(on_echo=lambda ctx: m.STATUS_SUCCESS, on_store=on_store)
    scp = serve(host, port, ae_title, handlers, dimse_timeout=dimse_timeout)
    sink = StoreSink(scp, output_root)
    return sink
