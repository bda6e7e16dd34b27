"""Conversion of retrieved series into ordered 8-bit preview images."""

from .export import encode_jpeg, encode_pnm, export_series, render_preview, sort_instances
from .pixels import PixelBuffer, PreviewError, UnsupportedPhotometricError, extract_pixels
from .windowing import WindowParams, apply_windowing, resolve_window

__all__ = [
    "PixelBuffer",
    "PreviewError",
    "UnsupportedPhotometricError",
    "WindowParams",
    "apply_windowing",
    "encode_jpeg",
    "encode_pnm",
    "export_series",
    "extract_pixels",
    "render_preview",
    "resolve_window",
    "sort_instances",
]
