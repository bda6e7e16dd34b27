"""DICOM Part 10 file reading and writing."""

from __future__ import annotations

from dataclasses import dataclass

from . import uids
from .codec import _Reader, _parse_element, encode_dataset, encode_element, parse_dataset
from .dataset import DataElement, DataSet
from .errors import FileFormatError, UnsupportedTransferSyntaxError
from .tags import Tag
from .vr import VR

MAGIC = b"DICM"
PREAMBLE_SIZE = 128

_GROUP_LENGTH = Tag(0x0002, 0x0000)
_VERSION = Tag(0x0002, 0x0001)
_MEDIA_SOP_CLASS = Tag(0x0002, 0x0002)
_MEDIA_SOP_INSTANCE = Tag(0x0002, 0x0003)
_TRANSFER_SYNTAX = Tag(0x0002, 0x0010)
_IMPLEMENTATION_UID = Tag(0x0002, 0x0012)
_IMPLEMENTATION_VERSION = Tag(0x0002, 0x0013)


@dataclass(frozen=True)
class FileMeta:
    transfer_syntax_uid: str
    media_storage_sop_class_uid: str
    media_storage_sop_instance_uid: str
    implementation_class_uid: str = uids.IMPLEMENTATION_CLASS_UID


def read_part10_file(data: bytes) -> tuple[FileMeta, DataSet]:
    """Parse preamble, magic, file-meta group and main dataset."""
    if len(data) < PREAMBLE_SIZE + 4:
        raise FileFormatError(f"file too short ({len(data)} bytes)")
    if data[PREAMBLE_SIZE:PREAMBLE_SIZE + 4] != MAGIC:
        raise FileFormatError("missing DICM magic")

    reader = _Reader(data)
    reader.pos = PREAMBLE_SIZE + 4

    # File meta is always explicit VR LE; the group length element bounds it.
    meta_ds = DataSet()
    first = _parse_element(reader, explicit=True)
    if first.tag == _GROUP_LENGTH:
        end = reader.pos + first.as_int()
        while reader.pos < end:
            meta_ds.put(_parse_element(reader, explicit=True))
    else:
        meta_ds.put(first)
        while reader.remaining() and reader.peek_tag().group == 0x0002:
            meta_ds.put(_parse_element(reader, explicit=True))

    ts_element = meta_ds.get(_TRANSFER_SYNTAX)
    if ts_element is None:
        raise FileFormatError("file meta lacks a transfer syntax element")
    syntax = ts_element.as_string()
    if syntax not in uids.SUPPORTED_TRANSFER_SYNTAXES:
        raise UnsupportedTransferSyntaxError(syntax)

    meta = FileMeta(
        transfer_syntax_uid=syntax,
        media_storage_sop_class_uid=meta_ds.text(_MEDIA_SOP_CLASS),
        media_storage_sop_instance_uid=meta_ds.text(_MEDIA_SOP_INSTANCE),
        implementation_class_uid=meta_ds.text(_IMPLEMENTATION_UID),
    )
    return meta, parse_dataset(data[reader.pos:], syntax)


def write_part10_file(meta: FileMeta, ds: DataSet) -> bytes:
    """Encode preamble + magic + file meta + dataset under meta's syntax."""
    for name in ("transfer_syntax_uid", "media_storage_sop_class_uid",
                 "media_storage_sop_instance_uid", "implementation_class_uid"):
        if not getattr(meta, name):
            raise FileFormatError(f"file meta field {name} is empty")
    if meta.transfer_syntax_uid not in uids.SUPPORTED_TRANSFER_SYNTAXES:
        raise UnsupportedTransferSyntaxError(meta.transfer_syntax_uid)

    group = DataSet.of(
        DataElement(_VERSION, VR.OB, b"\x00\x01"),
        DataElement.from_text(_MEDIA_SOP_CLASS, VR.UI, meta.media_storage_sop_class_uid),
        DataElement.from_text(_MEDIA_SOP_INSTANCE, VR.UI, meta.media_storage_sop_instance_uid),
        DataElement.from_text(_TRANSFER_SYNTAX, VR.UI, meta.transfer_syntax_uid),
        DataElement.from_text(_IMPLEMENTATION_UID, VR.UI, meta.implementation_class_uid),
        DataElement.from_text(_IMPLEMENTATION_VERSION, VR.SH, uids.IMPLEMENTATION_VERSION_NAME),
    )
    group_bytes = b"".join(encode_element(el, explicit=True) for el in group)
    length_el = DataElement.from_ints(_GROUP_LENGTH, VR.UL, len(group_bytes))

    return (b"\x00" * PREAMBLE_SIZE + MAGIC
            + encode_element(length_el, explicit=True) + group_bytes
            + encode_dataset(ds, meta.transfer_syntax_uid))
