"""Pixel extraction from image datasets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dicom import DataSet, Tag


class PreviewError(Exception):
    """Preview pipeline failure."""


class UnsupportedPhotometricError(PreviewError):
    def __init__(self, photometric: str):
        self.photometric = photometric
        super().__init__(f"unsupported photometric interpretation {photometric!r}")


TAG_SAMPLES = Tag(0x0028, 0x0002)
TAG_PHOTOMETRIC = Tag(0x0028, 0x0004)
TAG_PLANAR = Tag(0x0028, 0x0006)
TAG_ROWS = Tag(0x0028, 0x0010)
TAG_COLS = Tag(0x0028, 0x0011)
TAG_BITS_ALLOCATED = Tag(0x0028, 0x0100)
TAG_BITS_STORED = Tag(0x0028, 0x0101)
TAG_PIXEL_REPRESENTATION = Tag(0x0028, 0x0103)
TAG_PIXEL_DATA = Tag(0x7FE0, 0x0010)

SUPPORTED_PHOTOMETRIC = ("MONOCHROME1", "MONOCHROME2", "RGB")


@dataclass
class PixelBuffer:
    rows: int
    cols: int
    samples_per_pixel: int
    bits_allocated: int
    bits_stored: int
    pixel_representation: int  # 0 unsigned, 1 signed
    photometric: str
    data: np.ndarray  # (rows, cols) or (rows, cols, 3), row-major

    @property
    def is_monochrome(self) -> bool:
        return self.samples_per_pixel == 1


def extract_pixels(ds: DataSet) -> PixelBuffer:
    """Decode native pixel data; validates the header against the payload."""
    for tag, name in ((TAG_ROWS, "Rows"), (TAG_COLS, "Columns"),
                      (TAG_BITS_ALLOCATED, "BitsAllocated"),
                      (TAG_PIXEL_DATA, "PixelData")):
        if tag not in ds:
            raise PreviewError(f"dataset lacks {name} {tag}")

    rows = ds.int_value(TAG_ROWS)
    cols = ds.int_value(TAG_COLS)
    bits_allocated = ds.int_value(TAG_BITS_ALLOCATED)
    bits_stored = ds.int_value(TAG_BITS_STORED, bits_allocated)
    samples = ds.int_value(TAG_SAMPLES, 1)
    representation = ds.int_value(TAG_PIXEL_REPRESENTATION, 0)
    photometric = ds.text(TAG_PHOTOMETRIC, "MONOCHROME2")

    if photometric not in SUPPORTED_PHOTOMETRIC:
        raise UnsupportedPhotometricError(photometric)
    if photometric == "RGB":
        if samples != 3 or bits_allocated != 8:
            raise PreviewError("RGB requires 3 samples of 8 bits each")
        if ds.int_value(TAG_PLANAR, 0) != 0:
            raise PreviewError("planar (non-interleaved) RGB is not supported")
    elif samples != 1:
        raise PreviewError(f"{photometric} with {samples} samples per pixel")
    if bits_allocated not in (8, 16):
        raise PreviewError(f"unsupported bit depth: {bits_allocated}")

    raw = ds.get(TAG_PIXEL_DATA).value
    expected = rows * cols * samples * (bits_allocated // 8)
    # Tolerate the single padding byte an odd-sized payload acquires.
    if len(raw) != expected and len(raw) != expected + (expected % 2):
        raise PreviewError(
            f"pixel data is {len(raw)} bytes, header implies {expected}")
    raw = raw[:expected]

    if bits_allocated == 8:
        dtype = np.uint8
    else:
        dtype = np.dtype("<i2") if representation == 1 else np.dtype("<u2")
    array = np.frombuffer(raw, dtype=dtype)
    shape = (rows, cols, 3) if samples == 3 else (rows, cols)
    return PixelBuffer(rows, cols, samples, bits_allocated, bits_stored,
                       representation, photometric, array.reshape(shape))
