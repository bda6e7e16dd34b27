"""Grayscale rendering: modality rescale plus the linear windowing function."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dicom import DataSet, Tag
from .pixels import PixelBuffer, PreviewError

TAG_WINDOW_CENTER = Tag(0x0028, 0x1050)
TAG_WINDOW_WIDTH = Tag(0x0028, 0x1051)
TAG_RESCALE_INTERCEPT = Tag(0x0028, 0x1052)
TAG_RESCALE_SLOPE = Tag(0x0028, 0x1053)


@dataclass(frozen=True)
class WindowParams:
    center: float
    width: float  # >= 1
    rescale_slope: float = 1.0
    rescale_intercept: float = 0.0
    source: str = "file"  # "file" | "default-minmax"
    clamped: bool = False


def _first_float(ds: DataSet, tag: Tag) -> float | None:
    el = ds.get(tag)
    if el is None or el.is_empty():
        return None
    return el.as_floats()[0]


def resolve_window(ds: DataSet, buf: PixelBuffer) -> WindowParams:
    """File window when both center and width are present, else min/max."""
    if not buf.is_monochrome:
        raise PreviewError("windowing applies to monochrome buffers only")
    slope = _first_float(ds, TAG_RESCALE_SLOPE)
    intercept = _first_float(ds, TAG_RESCALE_INTERCEPT)
    slope = 1.0 if slope is None else slope
    intercept = 0.0 if intercept is None else intercept

    center = _first_float(ds, TAG_WINDOW_CENTER)
    width = _first_float(ds, TAG_WINDOW_WIDTH)
    if center is not None and width is not None:
        clamped = width < 1
        return WindowParams(center, max(width, 1.0), slope, intercept,
                            source="file", clamped=clamped)

    rescaled = buf.data.astype(np.float64) * slope + intercept
    lo = float(rescaled.min())
    hi = float(rescaled.max())
    return WindowParams(center=(lo + hi) / 2.0, width=hi - lo + 1.0,
                        rescale_slope=slope, rescale_intercept=intercept,
                        source="default-minmax")


def apply_windowing(buf: PixelBuffer, params: WindowParams) -> np.ndarray:
    """Map samples to 8 bits with the linear window [c, w]:

        x' = x * slope + intercept
        y  = 0                                    if x' <= c - 0.5 - (w-1)/2
        y  = 255                                  if x' >  c - 0.5 + (w-1)/2
        y  = round(((x' - (c-0.5)) / (w-1) + 0.5) * 255)   otherwise

    with round half away from zero. MONOCHROME1 output is inverted."""
    if not buf.is_monochrome:
        raise PreviewError("windowing applies to monochrome buffers only")
    c = float(params.center)
    w = max(float(params.width), 1.0)
    x = buf.data.astype(np.float64) * params.rescale_slope + params.rescale_intercept

    lower = c - 0.5 - (w - 1.0) / 2.0
    upper = c - 0.5 + (w - 1.0) / 2.0
    out = np.zeros(x.shape, dtype=np.uint8)
    out[x > upper] = 255
    if w > 1.0:
        mid = (x > lower) & (x <= upper)
        scaled = ((x[mid] - (c - 0.5)) / (w - 1.0) + 0.5) * 255.0
        out[mid] = np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)
    if buf.photometric == "MONOCHROME1":
        out = (255 - out.astype(np.int16)).astype(np.uint8)
    return out
