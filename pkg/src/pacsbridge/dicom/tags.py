"""DICOM tag type: a (group, element) pair of 16-bit values."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

_TAG_RE = re.compile(r"^\(?([0-9A-Fa-f]{4})\s*,\s*([0-9A-Fa-f]{4})\)?$")


@total_ordering
@dataclass(frozen=True)
class Tag:
    group: int
    element: int

    def __post_init__(self):
        for part in (self.group, self.element):
            if not 0 <= part <= 0xFFFF:
                raise ValueError(f"tag component out of range: {part:#x}")

    @classmethod
    def parse(cls, text: str) -> "Tag":
        """Parse "(GGGG,EEEE)" or "GGGG,EEEE" (hex, case-insensitive)."""
        m = _TAG_RE.match(text.strip())
        if m is None:
            raise ValueError(f"not a tag: {text!r}")
        return cls(int(m.group(1), 16), int(m.group(2), 16))

    def __str__(self) -> str:
        return f"({self.group:04X},{self.element:04X})"

    def __repr__(self) -> str:
        return f"Tag{self}"

    def __lt__(self, other: "Tag") -> bool:
        if not isinstance(other, Tag):
            return NotImplemented
        return (self.group, self.element) < (other.group, other.element)

    @property
    def is_private(self) -> bool:
        return self.group % 2 == 1
