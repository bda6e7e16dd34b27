"""Series export: ordered 8-bit previews as lossless masters plus JPEG copies."""

from __future__ import annotations

import io
import logging
from pathlib import Path

import numpy as np
from PIL import Image

from ..dicom import DataSet, DicomError, Tag, read_part10_file
from .pixels import PreviewError, extract_pixels
from .windowing import apply_windowing, resolve_window

log = logging.getLogger(__name__)

TAG_INSTANCE_NUMBER = Tag(0x0020, 0x0013)
TAG_SOP_INSTANCE = Tag(0x0008, 0x0018)

FORMATS = ("lossless", "viewer")


def sort_instances(files: list[tuple[Path, DataSet]]) -> list[tuple[Path, DataSet]]:
    """Ascending InstanceNumber; absent numbers last; ties by SOP UID string."""
    def key(item: tuple[Path, DataSet]):
        _, ds = item
        el = ds.get(TAG_INSTANCE_NUMBER)
        number = None
        if el is not None and not el.is_empty():
            try:
                number = el.as_int()
            except ValueError:
                number = None
        return (number is None, number if number is not None else 0,
                ds.text(TAG_SOP_INSTANCE))
    return sorted(files, key=key)


def encode_pnm(pixels: np.ndarray) -> bytes:
    """Binary PGM for grayscale, PPM for RGB; byte-stable by construction."""
    if pixels.ndim == 2:
        header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n"
    elif pixels.ndim == 3 and pixels.shape[2] == 3:
        header = f"P6\n{pixels.shape[1]} {pixels.shape[0]}\n255\n"
    else:
        raise PreviewError(f"cannot serialize array of shape {pixels.shape}")
    return header.encode("ascii") + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def encode_jpeg(pixels: np.ndarray, quality: int = 90) -> bytes:
    image = Image.fromarray(pixels, mode="L" if pixels.ndim == 2 else "RGB")
    buffer = io.BytesIO()
    image.save(buffer, format="JPEG", quality=quality)
    return buffer.getvalue()


def render_preview(ds: DataSet) -> np.ndarray:
    """8-bit preview pixels: windowed grayscale, or direct RGB channels."""
    buf = extract_pixels(ds)
    if buf.photometric == "RGB":
        return np.ascontiguousarray(buf.data, dtype=np.uint8)
    return apply_windowing(buf, resolve_window(ds, buf))


def export_series(series_dir: Path | str, out_dir: Path | str,
                  formats: tuple[str, ...] = FORMATS) -> dict:
    """Convert every readable file under series_dir into img_NNNN previews.

    Returns the manifest: ordered entries plus per-file errors for inputs
    that could not be converted."""
    series_dir = Path(series_dir)
    out_dir = Path(out_dir)
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise ValueError(f"unknown preview formats: {sorted(unknown)}")

    errors: list[dict] = []
    readable: list[tuple[Path, DataSet]] = []
    candidates = sorted(series_dir.glob("*.dcm")) if series_dir.is_dir() else []
    for path in candidates:
        try:
            _, ds = read_part10_file(path.read_bytes())
            readable.append((path, ds))
        except (DicomError, OSError) as exc:
            log.warning("skipping unreadable %s: %s", path, exc)
            errors.append({"file": path.name, "error": str(exc)})
    if not readable:
        raise PreviewError(f"no readable DICOM files in {series_dir}")

    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[dict] = []
    for index, (path, ds) in enumerate(sort_instances(readable), start=1):
        try:
            pixels = render_preview(ds)
        except PreviewError as exc:
            errors.append({"file": path.name, "error": str(exc)})
            continue
        stem = f"img_{index:04d}"
        files: dict[str, str] = {}
        if "lossless" in formats:
            name = f"{stem}.ppm" if pixels.ndim == 3 else f"{stem}.pgm"
            (out_dir / name).write_bytes(encode_pnm(pixels))
            files["lossless"] = name
        if "viewer" in formats:
            name = f"{stem}.jpg"
            (out_dir / name).write_bytes(encode_jpeg(pixels))
            files["viewer"] = name
        el = ds.get(TAG_INSTANCE_NUMBER)
        number = None
        if el is not None and not el.is_empty():
            try:
                number = el.as_int()
            except ValueError:
                number = None
        entries.append({
            "instance_number": number,
            "sop_uid": ds.text(TAG_SOP_INSTANCE),
            "files": files,
        })

    return {
        "series_dir": str(series_dir),
        "entries": entries,
        "errors": errors,
    }
