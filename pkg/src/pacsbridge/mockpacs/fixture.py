"""Seedable in-memory PACS fixtures."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..dicom import DataElement, DataSet, Tag, VR
from ..dicom import dictionary
from ..dicom.uids import CT_IMAGE_STORAGE, MR_IMAGE_STORAGE

REQUIRED_TAGS = (
    Tag(0x0010, 0x0020),  # PatientID
    Tag(0x0020, 0x000D),  # StudyInstanceUID
    Tag(0x0020, 0x000E),  # SeriesInstanceUID
    Tag(0x0008, 0x0018),  # SOPInstanceUID
    Tag(0x0008, 0x0060),  # Modality
    Tag(0x0020, 0x0013),  # InstanceNumber
)


@dataclass(frozen=True)
class FaultPlan:
    # 1-based index of the store sub-operation (counted across the whole
    # server lifetime) that fails without a transfer.
    fail_nth_store: int | None = None
    # Find handlers stall instead of answering.
    withhold_find_response: bool = False
    # Associations are rejected outright.
    reject_association: bool = False


@dataclass
class Fixture:
    instances: list[DataSet] = field(default_factory=list)
    ae_registry: dict[str, tuple[str, int]] = field(default_factory=dict)
    fault_plan: FaultPlan | None = None

    def validate(self) -> None:
        seen: set[str] = set()
        for i, instance in enumerate(self.instances):
            for tag in REQUIRED_TAGS:
                el = instance.get(tag)
                if el is None or el.is_empty():
                    keyword = dictionary.lookup(tag).keyword
                    raise ValueError(f"instance #{i} lacks {keyword} {tag}")
            sop = instance.text(Tag(0x0008, 0x0018))
            if sop in seen:
                raise ValueError(f"duplicate SOPInstanceUID {sop!r}")
            seen.add(sop)


def gradient_pixels(rows: int = 16, cols: int = 16) -> bytes:
    """8-bit test pattern: value(r, c) = r * cols + c, modulo 256."""
    return bytes((r * cols + c) % 256 for r in range(rows) for c in range(cols))


def make_instance(*, patient_name: str, patient_id: str, study_uid: str,
                  series_uid: str, sop_uid: str, modality: str,
                  instance_number: int, sop_class: str,
                  extra: dict[str, str] | None = None,
                  rows: int = 16, cols: int = 16) -> DataSet:
    """A small complete image instance with gradient pixel data."""
    ds = DataSet()
    ds.set_text("SOPClassUID", sop_class)
    ds.set_text("SOPInstanceUID", sop_uid)
    ds.set_text("Modality", modality)
    ds.set_text("PatientName", patient_name)
    ds.set_text("PatientID", patient_id)
    ds.set_text("StudyInstanceUID", study_uid)
    ds.set_text("SeriesInstanceUID", series_uid)
    ds.set_int("InstanceNumber", instance_number)
    ds.set_int("SamplesPerPixel", 1)
    ds.set_text("PhotometricInterpretation", "MONOCHROME2")
    ds.set_int("Rows", rows)
    ds.set_int("Columns", cols)
    ds.set_int("BitsAllocated", 8)
    ds.set_int("BitsStored", 8)
    ds.set_int("HighBit", 7)
    ds.set_int("PixelRepresentation", 0)
    # OW matches the dictionary VR, so the element survives implicit
    # transport byte-identically.
    ds.put(DataElement.from_bytes(Tag(0x7FE0, 0x0010), VR.OW,
                                  gradient_pixels(rows, cols)))
    for keyword, value in (extra or {}).items():
        ds.set_text(keyword, value)
    return ds


def standard_fixture() -> Fixture:
    """One patient, one study, a 3-image CT series and a 2-image MR series."""
    study = dict(patient_name="DOE^JOHN", patient_id="P001", study_uid="1.2.3.1")
    study_extra = {
        "StudyDate": "20240102",
        "StudyTime": "101530",
        "StudyID": "ST01",
        "AccessionNumber": "ACC001",
        "StudyDescription": "CHEST ROUTINE",
        "PatientBirthDate": "19800304",
        "PatientSex": "M",
    }
    instances = []
    for n in range(1, 4):
        instances.append(make_instance(
            **study, series_uid="1.2.3.1.1", sop_uid=f"1.2.3.1.1.{n}",
            modality="CT", instance_number=n, sop_class=CT_IMAGE_STORAGE,
            extra={**study_extra, "SeriesDescription": "AXIAL CT",
                   "SeriesNumber": "1"}))
    for n in range(1, 3):
        instances.append(make_instance(
            **study, series_uid="1.2.3.1.2", sop_uid=f"1.2.3.1.2.{n}",
            modality="MR", instance_number=n, sop_class=MR_IMAGE_STORAGE,
            extra={**study_extra, "SeriesDescription": "T1 MR",
                   "SeriesNumber": "2"}))
    fixture = Fixture(instances=instances)
    fixture.validate()
    return fixture


# --- manifest loading ---------------------------------------------------------
#
# A manifest is a JSON document:
# {
#   "ae_registry": {"STORE_AE": ["127.0.0.1", 11113]},
#   "instances": [
#     {"PatientName": "DOE^JOHN", ..., "InstanceNumber": "1",
#      "pixels": {"rows": 16, "cols": 16, "pattern": "gradient"}}
#   ]
# }

def fixture_from_manifest(doc: dict) -> Fixture:
    instances = []
    for entry in doc.get("instances", []):
        ds = DataSet()
        pixels = entry.pop("pixels", None)
        for key, value in entry.items():
            if key.startswith("("):
                tag = Tag.parse(key)
                ds.put(DataElement.from_text(tag, dictionary.vr_for_tag(tag), str(value)))
            else:
                ds.set_text(key, str(value))
        if pixels:
            rows = int(pixels.get("rows", 16))
            cols = int(pixels.get("cols", 16))
            ds.set_int("SamplesPerPixel", 1)
            ds.set_text("PhotometricInterpretation", "MONOCHROME2")
            ds.set_int("Rows", rows)
            ds.set_int("Columns", cols)
            ds.set_int("BitsAllocated", 8)
            ds.set_int("BitsStored", 8)
            ds.set_int("HighBit", 7)
            ds.set_int("PixelRepresentation", 0)
            ds.put(DataElement.from_bytes(Tag(0x7FE0, 0x0010), VR.OW,
                                          gradient_pixels(rows, cols)))
        instances.append(ds)
    registry = {ae: (host, int(port))
                for ae, (host, port) in doc.get("ae_registry", {}).items()}
    fixture = Fixture(instances=instances, ae_registry=registry)
    fixture.validate()
    return fixture


def load_manifest(path: str | Path) -> Fixture:
    doc = json.loads(Path(path).read_text())
    return fixture_from_manifest(doc)
