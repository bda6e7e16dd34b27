"""DICOM data elements and ordered datasets."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import dictionary
from .tags import Tag
from .vr import TEXT_VRS, VR

_NUMERIC_FORMATS = {
    VR.US: "<H",
    VR.UL: "<I",
    VR.SS: "<h",
    VR.SL: "<i",
    VR.FL: "<f",
    VR.FD: "<d",
}


def pad_value(vr: VR, value: bytes) -> bytes:
    """Pad to even length: space for text VRs, NUL otherwise."""
    if len(value) % 2 == 0:
        return value
    if vr in TEXT_VRS:
        return value + b" "
    return value + b"\x00"


@dataclass(frozen=True)
class DataElement:
    tag: Tag
    vr: VR
    value: bytes = b""
    # Sequence payload; non-None only for VR SQ.
    items: tuple["DataSet", ...] | None = None
    # Preserve the length-encoding forms of parsed sequences so that
    # re-encoding reproduces the original byte stream.
    undefined_length: bool = False
    item_undefined: tuple[bool, ...] | None = None

    def __post_init__(self):
        if self.vr is VR.SQ:
            if self.items is None:
                object.__setattr__(self, "items", ())
            if self.item_undefined is None:
                object.__setattr__(self, "item_undefined",
                                   (False,) * len(self.items))
        elif self.items is not None:
            raise ValueError("items only valid for SQ elements")

    @classmethod
    def from_text(cls, tag: Tag, vr: VR, text: str | Iterable[str]) -> "DataElement":
        if not isinstance(text, str):
            text = "\\".join(text)
        return cls(tag, vr, pad_value(vr, text.encode("ascii")))

    @classmethod
    def from_bytes(cls, tag: Tag, vr: VR, value: bytes) -> "DataElement":
        return cls(tag, vr, pad_value(vr, value))

    @classmethod
    def from_ints(cls, tag: Tag, vr: VR, values: int | Iterable[int]) -> "DataElement":
        if isinstance(values, int):
            values = (values,)
        if vr is VR.IS:
            return cls.from_text(tag, vr, [str(v) for v in values])
        fmt = _NUMERIC_FORMATS[vr]
        return cls(tag, vr, b"".join(struct.pack(fmt, v) for v in values))

    @classmethod
    def from_tags(cls, tag: Tag, values: Iterable[Tag]) -> "DataElement":
        raw = b"".join(struct.pack("<HH", t.group, t.element) for t in values)
        return cls(tag, VR.AT, raw)

    @classmethod
    def sequence(cls, tag: Tag, items: Iterable["DataSet"]) -> "DataElement":
        return cls(tag, VR.SQ, b"", tuple(items))

    def as_string(self) -> str:
        """Whole value as text, trailing pad characters stripped."""
        return self.value.decode("ascii", errors="replace").rstrip(" \x00")

    def as_strings(self) -> list[str]:
        text = self.as_string()
        return text.split("\\") if text else []

    def as_int(self) -> int:
        values = self.as_ints()
        if len(values) != 1:
            raise ValueError(f"{self.tag} holds {len(values)} values, expected 1")
        return values[0]

    def as_ints(self) -> list[int]:
        if self.vr is VR.IS:
            return [int(s) for s in self.as_strings()]
        fmt = _NUMERIC_FORMATS.get(self.vr)
        if fmt is None:
            raise ValueError(f"{self.vr} is not an integer VR")
        width = struct.calcsize(fmt)
        return [struct.unpack(fmt, self.value[i:i + width])[0]
                for i in range(0, len(self.value), width)]

    def as_floats(self) -> list[float]:
        if self.vr is VR.DS:
            return [float(s) for s in self.as_strings()]
        if self.vr in (VR.FL, VR.FD):
            fmt = _NUMERIC_FORMATS[self.vr]
            width = struct.calcsize(fmt)
            return [struct.unpack(fmt, self.value[i:i + width])[0]
                    for i in range(0, len(self.value), width)]
        raise ValueError(f"{self.vr} is not a numeric VR")

    def as_tags(self) -> list[Tag]:
        if self.vr is not VR.AT:
            raise ValueError(f"{self.vr} is not AT")
        return [Tag(*struct.unpack("<HH", self.value[i:i + 4]))
                for i in range(0, len(self.value), 4)]

    def is_empty(self) -> bool:
        if self.vr is VR.SQ:
            return not self.items
        return len(self.value) == 0


@dataclass
class DataSet:
    """Ordered tag → element map; iteration is ascending tag order."""

    _elements: dict[Tag, DataElement] = field(default_factory=dict)

    @classmethod
    def of(cls, *elements: DataElement) -> "DataSet":
        ds = cls()
        for el in elements:
            ds.put(el)
        return ds

    def put(self, element: DataElement) -> None:
        """Insert or replace by tag."""
        self._elements[element.tag] = element

    def get(self, key: Tag | str) -> DataElement | None:
        return self._elements.get(self._resolve(key))

    def __contains__(self, key: Tag | str) -> bool:
        return self._resolve(key) in self._elements

    def __iter__(self) -> Iterator[DataElement]:
        for tag in sorted(self._elements):
            yield self._elements[tag]

    def __len__(self) -> int:
        return len(self._elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DataSet):
            return NotImplemented
        return dict(self._elements) == dict(other._elements)

    def tags(self) -> list[Tag]:
        return sorted(self._elements)

    def remove(self, key: Tag | str) -> None:
        self._elements.pop(self._resolve(key), None)

    # Convenience setters resolve the VR through the data dictionary.

    def set_text(self, key: Tag | str, text: str | Iterable[str]) -> None:
        tag = self._resolve(key)
        self.put(DataElement.from_text(tag, dictionary.vr_for_tag(tag), text))

    def set_int(self, key: Tag | str, value: int) -> None:
        tag = self._resolve(key)
        self.put(DataElement.from_ints(tag, dictionary.vr_for_tag(tag), value))

    def set_empty(self, key: Tag | str) -> None:
        tag = self._resolve(key)
        self.put(DataElement(tag, dictionary.vr_for_tag(tag)))

    def text(self, key: Tag | str, default: str = "") -> str:
        el = self.get(key)
        return el.as_string() if el is not None else default

    def int_value(self, key: Tag | str, default: int | None = None) -> int | None:
        el = self.get(key)
        if el is None or el.is_empty():
            return default
        return el.as_int()

    def copy(self) -> "DataSet":
        return DataSet(dict(self._elements))

    def _resolve(self, key: Tag | str) -> Tag:
        if isinstance(key, Tag):
            return key
        entry = dictionary.lookup(key)
        if entry is None:
            raise KeyError(f"unknown attribute keyword: {key!r}")
        return entry.tag

    def __repr__(self) -> str:
        inner = ", ".join(f"{el.tag}={el.as_string()!r}" if el.vr is not VR.SQ
                          else f"{el.tag}=SQ[{len(el.items or ())}]"
                          for el in self)
        return f"DataSet({inner})"
