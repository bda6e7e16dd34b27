"""Query matching over a fixture: hierarchy records and key semantics.

Implements universal, single-value (trailing-space insensitive),
wildcard, date-range and UID-list matching. Responses echo every
requested return key, empty when the record has no value for it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..dicom import DataElement, DataSet, Tag, VR
from ..dicom.dictionary import vr_for_tag

TAG_QUERY_LEVEL = Tag(0x0008, 0x0052)
TAG_SOP_CLASS = Tag(0x0008, 0x0016)
TAG_SOP_INSTANCE = Tag(0x0008, 0x0018)
TAG_STUDY_UID = Tag(0x0020, 0x000D)
TAG_SERIES_UID = Tag(0x0020, 0x000E)
TAG_INSTANCE_NUMBER = Tag(0x0020, 0x0013)
TAG_MODALITY = Tag(0x0008, 0x0060)
TAG_NUM_STUDY_SERIES = Tag(0x0020, 0x1206)
TAG_NUM_STUDY_INSTANCES = Tag(0x0020, 0x1208)
TAG_NUM_SERIES_INSTANCES = Tag(0x0020, 0x1209)

# Attributes that live at the image level only.
_IMAGE_TAGS = frozenset({
    TAG_SOP_CLASS, TAG_SOP_INSTANCE, TAG_INSTANCE_NUMBER,
    Tag(0x7FE0, 0x0010),
})
# Series-level attributes (plus everything in group 0028, which describes
# the series' images).
_SERIES_TAGS = frozenset({
    TAG_SERIES_UID, TAG_MODALITY,
    Tag(0x0020, 0x0011),  # SeriesNumber
    Tag(0x0008, 0x103E),  # SeriesDescription
    Tag(0x0008, 0x0021),  # SeriesDate
    Tag(0x0008, 0x0031),  # SeriesTime
})

LEVELS = ("STUDY", "SERIES", "IMAGE")


def _is_image_tag(tag: Tag) -> bool:
    return tag in _IMAGE_TAGS or tag.group == 0x0028


def _is_series_tag(tag: Tag) -> bool:
    return tag in _SERIES_TAGS


@dataclass(frozen=True)
class _Record:
    """One node at some hierarchy level, plus its member instances."""
    attributes: DataSet
    instances: tuple[DataSet, ...]


def _merge(target: DataSet, source: DataSet, *, skip) -> None:
    for el in source:
        if skip(el.tag) or el.tag in target:
            continue
        target.put(el)


def build_records(instances: list[DataSet], level: str) -> list[_Record]:
    if level == "IMAGE":
        return [_Record(ds, (ds,)) for ds in instances]

    if level == "SERIES":
        groups: dict[tuple[str, str], list[DataSet]] = {}
        for ds in instances:
            key = (ds.text(TAG_STUDY_UID), ds.text(TAG_SERIES_UID))
            groups.setdefault(key, []).append(ds)
        records = []
        for members in groups.values():
            attrs = DataSet()
            for ds in members:
                _merge(attrs, ds, skip=_is_image_tag)
            attrs.set_int(TAG_NUM_SERIES_INSTANCES, len(members))
            records.append(_Record(attrs, tuple(members)))
        return records

    if level == "STUDY":
        groups2: dict[str, list[DataSet]] = {}
        for ds in instances:
            groups2.setdefault(ds.text(TAG_STUDY_UID), []).append(ds)
        records = []
        for members in groups2.values():
            attrs = DataSet()
            for ds in members:
                _merge(attrs, ds, skip=lambda t: _is_image_tag(t) or _is_series_tag(t))
            series = {ds.text(TAG_SERIES_UID) for ds in members}
            attrs.set_int(TAG_NUM_STUDY_SERIES, len(series))
            attrs.set_int(TAG_NUM_STUDY_INSTANCES, len(members))
            records.append(_Record(attrs, tuple(members)))
        return records

    raise ValueError(f"unknown query level {level!r}")


# --- key semantics ------------------------------------------------------------

def _wildcard_regex(pattern: str) -> re.Pattern:
    out = []
    for ch in pattern:
        if ch == "*":
            out.append(".*")
        elif ch == "?":
            out.append(".")
        else:
            out.append(re.escape(ch))
    return re.compile("".join(out), re.DOTALL)


def _range_matches(pattern: str, value: str) -> bool:
    low, _, high = pattern.partition("-")
    if low and value < low:
        return False
    if high and value > high:
        return False
    return True


def value_matches(vr: VR, pattern: str, value: str) -> bool:
    """Single key against a single value, both without trailing padding."""
    pattern = pattern.rstrip(" ")
    value = value.rstrip(" ")
    if not pattern:
        return True
    if vr is VR.UI and "\\" in pattern:
        return value in pattern.split("\\")
    if vr in (VR.DA, VR.TM, VR.DT) and "-" in pattern:
        return _range_matches(pattern, value)
    if vr is not VR.UI and ("*" in pattern or "?" in pattern):
        return bool(_wildcard_regex(pattern).fullmatch(value))
    return pattern == value


def _key_matches(record: DataSet, tag: Tag, key: DataElement) -> bool:
    pattern = key.as_string()
    if not pattern:
        return True
    attr = record.get(tag)
    if attr is None:
        return False
    vr = key.vr if key.vr is not VR.UN else vr_for_tag(tag)
    values = attr.as_strings() or [""]
    return any(value_matches(vr, pattern, value) for value in values)


def match(instances: list[DataSet], identifier: DataSet) -> list[DataSet]:
    """All matching records at the identifier's level, as response datasets."""
    level = identifier.text(TAG_QUERY_LEVEL)
    if level not in LEVELS:
        return []
    responses = []
    unique_tag = {"STUDY": TAG_STUDY_UID, "SERIES": TAG_SERIES_UID,
                  "IMAGE": TAG_SOP_INSTANCE}[level]
    for record in build_records(instances, level):
        if not all(_key_matches(record.attributes, el.tag, el)
                   for el in identifier if el.tag != TAG_QUERY_LEVEL):
            continue
        rsp = DataSet()
        rsp.put(identifier.get(TAG_QUERY_LEVEL))
        for el in identifier:
            if el.tag == TAG_QUERY_LEVEL:
                continue
            attr = record.attributes.get(el.tag)
            if attr is not None:
                rsp.put(attr)
            else:
                rsp.put(DataElement(el.tag, el.vr if el.vr is not VR.UN
                                    else vr_for_tag(el.tag)))
        unique = record.attributes.get(unique_tag)
        if unique is not None:
            rsp.put(unique)
        responses.append(rsp)
    return responses


def resolve_instances(instances: list[DataSet], identifier: DataSet) -> list[DataSet]:
    """Instances selected by a retrieval identifier at its level."""
    level = identifier.text(TAG_QUERY_LEVEL)
    if level not in LEVELS:
        return []
    selected: list[DataSet] = []
    for record in build_records(instances, level):
        if all(_key_matches(record.attributes, el.tag, el)
               for el in identifier if el.tag != TAG_QUERY_LEVEL):
            selected.extend(record.instances)
    return selected
