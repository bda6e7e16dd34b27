"""Search filters and C-FIND identifier construction."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..dicom import DataElement, DataSet, Tag, VR
from ..dicom.dictionary import lookup, vr_for_tag

TAG_QUERY_LEVEL = Tag(0x0008, 0x0052)
TAG_STUDY_UID = Tag(0x0020, 0x000D)
TAG_SERIES_UID = Tag(0x0020, 0x000E)

_DATE_RE = re.compile(r"^\d{8}$")
_TIME_RE = re.compile(r"^\d{2}(\d{2}(\d{2}(\.\d{1,6})?)?)?$")

# Tags that receive an implicit trailing "*" when exact matching is off:
# person names plus the description fields. UIDs, dates and IDs never do.
_WILDCARDABLE_TAGS = frozenset({
    Tag(0x0008, 0x1030),  # StudyDescription
    Tag(0x0008, 0x103E),  # SeriesDescription
})


@dataclass(frozen=True)
class StudyFilters:
    study_date: str = ""
    study_time: str = ""
    study_id: str = ""
    referring_physician_name: str = ""
    accession_number: str = ""
    study_instance_uid: str = ""


@dataclass(frozen=True)
class PatientFilters:
    patient_id: str = ""
    patient_name: str = ""
    sex: str = ""
    birth_date: str = ""


@dataclass(frozen=True)
class SeriesFilters:
    modality: str = ""
    series_instance_uid: str = ""
    series_number: str = ""


@dataclass(frozen=True)
class QueryFilters:
    study: StudyFilters = field(default_factory=StudyFilters)
    patient: PatientFilters = field(default_factory=PatientFilters)
    series: SeriesFilters = field(default_factory=SeriesFilters)
    custom: tuple[tuple[Tag, str], ...] = ()

    def validate(self) -> None:
        for label, value in (("study date", self.study.study_date),
                             ("birth date", self.patient.birth_date)):
            if value:
                _validate_date(label, value)
        if self.study.study_time:
            _validate_time("study time", self.study.study_time)
        for tag, _value in self.custom:
            if lookup(tag) is None:
                raise ValueError(f"custom tag {tag} is not in the data dictionary")


def _validate_date(label: str, value: str) -> None:
    if "-" in value:
        low, _, high = value.partition("-")
        if not (low or high):
            raise ValueError(f"{label} range needs at least one bound: {value!r}")
        for part in (low, high):
            if part and not _DATE_RE.match(part):
                raise ValueError(f"{label} bound is not YYYYMMDD: {part!r}")
    elif not _DATE_RE.match(value):
        raise ValueError(f"{label} is not YYYYMMDD or a range: {value!r}")


def _validate_time(label: str, value: str) -> None:
    parts = value.partition("-") if "-" in value else (value, "", "")
    for part in (parts[0], parts[2]):
        if part and not _TIME_RE.match(part):
            raise ValueError(f"{label} is not HH[MM[SS]]: {part!r}")


# Per level: (filter value extractor tag) matching/return keys.
_STUDY_KEYS: tuple[tuple[Tag, str], ...] = (
    (Tag(0x0008, 0x0020), "study.study_date"),
    (Tag(0x0008, 0x0030), "study.study_time"),
    (Tag(0x0020, 0x0010), "study.study_id"),
    (Tag(0x0008, 0x0090), "study.referring_physician_name"),
    (Tag(0x0008, 0x0050), "study.accession_number"),
    (Tag(0x0020, 0x000D), "study.study_instance_uid"),
    (Tag(0x0010, 0x0020), "patient.patient_id"),
    (Tag(0x0010, 0x0010), "patient.patient_name"),
    (Tag(0x0010, 0x0040), "patient.sex"),
    (Tag(0x0010, 0x0030), "patient.birth_date"),
    (Tag(0x0008, 0x1030), ""),  # StudyDescription: return key only
)

_SERIES_KEYS: tuple[tuple[Tag, str], ...] = (
    (Tag(0x0008, 0x0060), "series.modality"),
    (Tag(0x0020, 0x000E), "series.series_instance_uid"),
    (Tag(0x0020, 0x0011), "series.series_number"),
    (Tag(0x0008, 0x103E), ""),  # SeriesDescription
    (Tag(0x0020, 0x1209), ""),  # NumberOfSeriesRelatedInstances
)

_IMAGE_KEYS: tuple[tuple[Tag, str], ...] = (
    (Tag(0x0008, 0x0018), ""),  # SOPInstanceUID
    (Tag(0x0020, 0x0013), ""),  # InstanceNumber
)

LEVELS = ("STUDY", "SERIES", "IMAGE")


def _field_value(filters: QueryFilters, path: str) -> str:
    if not path:
        return ""
    group, name = path.split(".")
    return getattr(getattr(filters, group), name)


def _apply_wildcard(tag: Tag, vr: VR, value: str, exact_match: bool) -> str:
    if exact_match or not value:
        return value
    if "*" in value or "?" in value:
        return value
    if vr is VR.PN or tag in _WILDCARDABLE_TAGS:
        return value + "*"
    return value


def build_identifier(filters: QueryFilters, level: str, *,
                     exact_match: bool = False,
                     study_uid: str | None = None,
                     series_uid: str | None = None) -> DataSet:
    """Identifier with matching keys for populated filters and zero-length
    return keys for every displayed column of the level."""
    if level not in LEVELS:
        raise ValueError(f"unknown query level {level!r}")
    if level in ("SERIES", "IMAGE") and not study_uid:
        raise ValueError(f"{level}-level identifier requires the parent study UID")
    if level == "IMAGE" and not series_uid:
        raise ValueError("IMAGE-level identifier requires the parent series UID")
    filters.validate()

    identifier = DataSet()
    identifier.set_text(TAG_QUERY_LEVEL, level)

    keys = {"STUDY": _STUDY_KEYS, "SERIES": _SERIES_KEYS, "IMAGE": _IMAGE_KEYS}[level]
    for tag, path in keys:
        vr = vr_for_tag(tag)
        value = _apply_wildcard(tag, vr, _field_value(filters, path), exact_match)
        identifier.put(DataElement.from_text(tag, vr, value))

    if level == "STUDY":
        for tag, value in filters.custom:
            vr = vr_for_tag(tag)
            identifier.put(DataElement.from_text(
                tag, vr, _apply_wildcard(tag, vr, value, exact_match)))
    if level in ("SERIES", "IMAGE"):
        identifier.put(DataElement.from_text(TAG_STUDY_UID, VR.UI, study_uid))
    if level == "IMAGE":
        identifier.put(DataElement.from_text(TAG_SERIES_UID, VR.UI, series_uid))
    return identifier
