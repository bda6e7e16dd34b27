"""Dataset codecs for the two native transfer syntaxes.

Both directions work element-at-a-time over little-endian byte strings.
Parsed sequences remember whether they used defined or undefined lengths
so re-encoding a well-formed stream reproduces it byte for byte.
"""

from __future__ import annotations

import struct

from . import dictionary, uids
from .dataset import DataElement, DataSet
from .errors import CodecError, UnsupportedTransferSyntaxError
from .tags import Tag
from .vr import VR, is_known, is_long_form

UNDEFINED_LENGTH = 0xFFFFFFFF

_ITEM = Tag(0xFFFE, 0xE000)
_ITEM_DELIMITER = Tag(0xFFFE, 0xE00D)
_SEQUENCE_DELIMITER = Tag(0xFFFE, 0xE0DD)


def _check_syntax(syntax: str) -> bool:
    """True for explicit VR; raises for unsupported syntaxes."""
    if syntax == uids.EXPLICIT_VR_LE:
        return True
    if syntax == uids.IMPLICIT_VR_LE:
        return False
    raise UnsupportedTransferSyntaxError(syntax)


# --- encoding ---------------------------------------------------------------

def encode_dataset(ds: DataSet, syntax: str) -> bytes:
    explicit = _check_syntax(syntax)
    return b"".join(encode_element(el, explicit) for el in ds)


def encode_element(el: DataElement, explicit: bool) -> bytes:
    if el.vr is VR.SQ:
        body = _encode_sq_body(el, explicit)
        length = UNDEFINED_LENGTH if el.undefined_length else len(body)
    else:
        body = el.value
        if len(body) % 2:
            raise CodecError(f"odd value length for {el.tag}: {len(body)}")
        length = len(body)

    head = struct.pack("<HH", el.tag.group, el.tag.element)
    if explicit:
        code = el.vr.value.encode("ascii")
        if el.vr in (VR.OB, VR.OW, VR.UN, VR.SQ):
            head += code + b"\x00\x00" + struct.pack("<I", length)
        else:
            if length > 0xFFFF:
                raise CodecError(f"value too long for short-form VR {el.vr}: {length}")
            head += code + struct.pack("<H", length)
    else:
        head += struct.pack("<I", length)
    return head + body


def _encode_sq_body(el: DataElement, explicit: bool) -> bytes:
    out = bytearray()
    flags = el.item_undefined or (False,) * len(el.items or ())
    for item, item_undefined in zip(el.items or (), flags):
        content = b"".join(encode_element(child, explicit) for child in item)
        if item_undefined:
            out += struct.pack("<HHI", _ITEM.group, _ITEM.element, UNDEFINED_LENGTH)
            out += content
            out += struct.pack("<HHI", _ITEM_DELIMITER.group, _ITEM_DELIMITER.element, 0)
        else:
            out += struct.pack("<HHI", _ITEM.group, _ITEM.element, len(content))
            out += content
    if el.undefined_length:
        out += struct.pack("<HHI", _SEQUENCE_DELIMITER.group, _SEQUENCE_DELIMITER.element, 0)
    return bytes(out)


# --- parsing ----------------------------------------------------------------

class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def remaining(self) -> int:
        return len(self.data) - self.pos

    def take(self, n: int) -> bytes:
        if self.remaining() < n:
            raise CodecError(
                f"truncated stream: need {n} bytes at offset {self.pos}, "
                f"have {self.remaining()}")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def peek_tag(self) -> Tag:
        if self.remaining() < 4:
            raise CodecError(f"truncated tag at offset {self.pos}")
        group, element = struct.unpack_from("<HH", self.data, self.pos)
        return Tag(group, element)


def parse_dataset(data: bytes, syntax: str) -> DataSet:
    explicit = _check_syntax(syntax)
    reader = _Reader(data)
    ds = DataSet()
    while reader.remaining():
        ds.put(_parse_element(reader, explicit))
    return ds


def _parse_element(reader: _Reader, explicit: bool) -> DataElement:
    group, element = struct.unpack("<HH", reader.take(4))
    tag = Tag(group, element)
    if explicit:
        code = reader.take(2).decode("ascii", errors="replace")
        if is_known(code):
            vr = VR(code)
            if vr in (VR.OB, VR.OW, VR.UN, VR.SQ):
                reader.take(2)
                (length,) = struct.unpack("<I", reader.take(4))
            else:
                (length,) = struct.unpack("<H", reader.take(2))
        else:
            # Unrecognized codes are long-form; keep the payload as UN.
            vr = VR.UN
            if not is_long_form(code):  # pragma: no cover - is_long_form is total
                raise CodecError(f"unreachable: {code}")
            reader.take(2)
            (length,) = struct.unpack("<I", reader.take(4))
    else:
        vr = dictionary.vr_for_tag(tag)
        (length,) = struct.unpack("<I", reader.take(4))

    if length == UNDEFINED_LENGTH:
        if vr not in (VR.SQ, VR.UN):
            raise CodecError(f"undefined length on non-sequence element {tag}")
        # UN of undefined length carries implicit-VR sequence items.
        item_explicit = explicit if vr is VR.SQ else False
        items, flags = _parse_items_undefined(reader, item_explicit)
        return DataElement(tag, VR.SQ, b"", items,
                           undefined_length=True, item_undefined=flags)

    if length % 2:
        raise CodecError(f"odd embedded length {length} for {tag}")
    if vr is VR.SQ:
        body = reader.take(length)
        items, flags = _parse_items_defined(body, explicit)
        return DataElement(tag, VR.SQ, b"", items,
                           undefined_length=False, item_undefined=flags)
    return DataElement(tag, vr, reader.take(length))


def _parse_items_defined(body: bytes, explicit: bool):
    reader = _Reader(body)
    items: list[DataSet] = []
    flags: list[bool] = []
    while reader.remaining():
        item, undefined = _parse_one_item(reader, explicit)
        items.append(item)
        flags.append(undefined)
    return tuple(items), tuple(flags)


def _parse_items_undefined(reader: _Reader, explicit: bool):
    items: list[DataSet] = []
    flags: list[bool] = []
    while True:
        tag = reader.peek_tag()
        if tag == _SEQUENCE_DELIMITER:
            reader.take(8)
            break
        item, undefined = _parse_one_item(reader, explicit)
        items.append(item)
        flags.append(undefined)
    return tuple(items), tuple(flags)


def _parse_one_item(reader: _Reader, explicit: bool):
    group, element = struct.unpack("<HH", reader.take(4))
    if Tag(group, element) != _ITEM:
        raise CodecError(f"expected sequence item, found {Tag(group, element)}")
    (length,) = struct.unpack("<I", reader.take(4))
    item = DataSet()
    if length == UNDEFINED_LENGTH:
        while reader.peek_tag() != _ITEM_DELIMITER:
            item.put(_parse_element(reader, explicit))
        reader.take(8)
        return item, True
    if length % 2:
        raise CodecError(f"odd item length {length}")
    inner = _Reader(reader.take(length))
    while inner.remaining():
        item.put(_parse_element(inner, explicit))
    return item, False
