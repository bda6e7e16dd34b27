"""DIMSE command sets, status classification and P-DATA fragmentation.

Command sets always travel as implicit VR little endian with a leading
(0000,0000) group length; data sets use the accepted transfer syntax of
their presentation context.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from ..dicom import DataElement, DataSet, Tag, VR, encode_dataset, parse_dataset
from ..dicom.uids import IMPLICIT_VR_LE
from .errors import ProtocolError
from .pdu import PDataTf, Pdv

# Command field values (requests; responses are request | 0x8000).
C_STORE_RQ = 0x0001
C_FIND_RQ = 0x0020
C_MOVE_RQ = 0x0021
C_ECHO_RQ = 0x0030
RSP_BIT = 0x8000

NO_DATA_SET = 0x0101

TAG_GROUP_LENGTH = Tag(0x0000, 0x0000)
TAG_AFFECTED_SOP_CLASS = Tag(0x0000, 0x0002)
TAG_COMMAND_FIELD = Tag(0x0000, 0x0100)
TAG_MESSAGE_ID = Tag(0x0000, 0x0110)
TAG_MESSAGE_ID_RESPONDED = Tag(0x0000, 0x0120)
TAG_MOVE_DESTINATION = Tag(0x0000, 0x0600)
TAG_PRIORITY = Tag(0x0000, 0x0700)
TAG_DATA_SET_TYPE = Tag(0x0000, 0x0800)
TAG_STATUS = Tag(0x0000, 0x0900)
TAG_ERROR_COMMENT = Tag(0x0000, 0x0902)
TAG_AFFECTED_SOP_INSTANCE = Tag(0x0000, 0x1000)
TAG_REMAINING = Tag(0x0000, 0x1020)
TAG_COMPLETED = Tag(0x0000, 0x1021)
TAG_FAILED = Tag(0x0000, 0x1022)
TAG_WARNING = Tag(0x0000, 0x1023)

STATUS_SUCCESS = 0x0000
STATUS_PENDING = 0xFF00
STATUS_PENDING_WARNING = 0xFF01
STATUS_CANCEL = 0xFE00
STATUS_MOVE_DESTINATION_UNKNOWN = 0xA801
STATUS_UNABLE_TO_PROCESS = 0xC000
STATUS_OUT_OF_RESOURCES = 0xA700
STATUS_UNABLE_TO_PERFORM_SUBOPS = 0xA702
STATUS_SUBOPS_ONE_OR_MORE_FAILURES = 0xB000
STATUS_UNRECOGNIZED_OPERATION = 0x0211


class StatusClass(enum.Enum):
    SUCCESS = "success"
    PENDING = "pending"
    CANCEL = "cancel"
    FAILURE = "failure"


def classify_status(code: int) -> StatusClass:
    """Total classification of all 16-bit status codes."""
    code &= 0xFFFF
    if code == STATUS_SUCCESS:
        return StatusClass.SUCCESS
    if code in (STATUS_PENDING, STATUS_PENDING_WARNING):
        return StatusClass.PENDING
    if code == STATUS_CANCEL:
        return StatusClass.CANCEL
    return StatusClass.FAILURE


@dataclass(frozen=True)
class Status:
    code: int
    comment: str = ""

    @property
    def status_class(self) -> StatusClass:
        return classify_status(self.code)

    @property
    def is_success(self) -> bool:
        return self.status_class is StatusClass.SUCCESS

    @property
    def is_pending(self) -> bool:
        return self.status_class is StatusClass.PENDING

    def __str__(self) -> str:
        return f"0x{self.code:04X} ({self.status_class.value})"


@dataclass(frozen=True)
class DimseMessage:
    command: DataSet
    data: DataSet | None
    context_id: int

    @property
    def command_field(self) -> int:
        value = self.command.int_value(TAG_COMMAND_FIELD)
        if value is None:
            raise ProtocolError("command set lacks (0000,0100) CommandField")
        return value

    @property
    def message_id(self) -> int | None:
        return self.command.int_value(TAG_MESSAGE_ID)

    @property
    def message_id_responded(self) -> int | None:
        return self.command.int_value(TAG_MESSAGE_ID_RESPONDED)

    @property
    def status(self) -> Status:
        code = self.command.int_value(TAG_STATUS)
        if code is None:
            raise ProtocolError("response lacks (0000,0900) Status")
        return Status(code & 0xFFFF, self.command.text(TAG_ERROR_COMMENT))

    def has_data(self) -> bool:
        return self.data is not None


# --- command set construction ------------------------------------------------

def _us(ds: DataSet, tag: Tag, value: int) -> None:
    ds.put(DataElement.from_ints(tag, VR.US, value))


def _ui(ds: DataSet, tag: Tag, value: str) -> None:
    ds.put(DataElement.from_text(tag, VR.UI, value))


def echo_rq(message_id: int, sop_class: str) -> DataSet:
    ds = DataSet()
    _ui(ds, TAG_AFFECTED_SOP_CLASS, sop_class)
    _us(ds, TAG_COMMAND_FIELD, C_ECHO_RQ)
    _us(ds, TAG_MESSAGE_ID, message_id)
    _us(ds, TAG_DATA_SET_TYPE, NO_DATA_SET)
    return ds


def find_rq(message_id: int, sop_class: str) -> DataSet:
    ds = DataSet()
    _ui(ds, TAG_AFFECTED_SOP_CLASS, sop_class)
    _us(ds, TAG_COMMAND_FIELD, C_FIND_RQ)
    _us(ds, TAG_MESSAGE_ID, message_id)
    _us(ds, TAG_PRIORITY, 0)
    _us(ds, TAG_DATA_SET_TYPE, 0x0000)
    return ds


def move_rq(message_id: int, sop_class: str, destination_ae: str) -> DataSet:
    ds = DataSet()
    _ui(ds, TAG_AFFECTED_SOP_CLASS, sop_class)
    _us(ds, TAG_COMMAND_FIELD, C_MOVE_RQ)
    _us(ds, TAG_MESSAGE_ID, message_id)
    ds.put(DataElement.from_text(TAG_MOVE_DESTINATION, VR.AE, destination_ae))
    _us(ds, TAG_PRIORITY, 0)
    _us(ds, TAG_DATA_SET_TYPE, 0x0000)
    return ds


def store_rq(message_id: int, sop_class: str, sop_instance: str) -> DataSet:
    ds = DataSet()
    _ui(ds, TAG_AFFECTED_SOP_CLASS, sop_class)
    _us(ds, TAG_COMMAND_FIELD, C_STORE_RQ)
    _us(ds, TAG_MESSAGE_ID, message_id)
    _us(ds, TAG_PRIORITY, 0)
    _us(ds, TAG_DATA_SET_TYPE, 0x0000)
    _ui(ds, TAG_AFFECTED_SOP_INSTANCE, sop_instance)
    return ds


def response(request: DataSet, status: int, *, with_data: bool = False,
             comment: str = "", counters: dict[Tag, int] | None = None) -> DataSet:
    """Build the matching response command set for any request."""
    ds = DataSet()
    sop_class = request.text(TAG_AFFECTED_SOP_CLASS)
    if sop_class:
        _ui(ds, TAG_AFFECTED_SOP_CLASS, sop_class)
    _us(ds, TAG_COMMAND_FIELD, (request.int_value(TAG_COMMAND_FIELD) or 0) | RSP_BIT)
    _us(ds, TAG_MESSAGE_ID_RESPONDED, request.int_value(TAG_MESSAGE_ID) or 0)
    _us(ds, TAG_DATA_SET_TYPE, 0x0000 if with_data else NO_DATA_SET)
    _us(ds, TAG_STATUS, status)
    if comment:
        ds.put(DataElement.from_text(TAG_ERROR_COMMENT, VR.LO, comment))
    sop_instance = request.text(TAG_AFFECTED_SOP_INSTANCE)
    if sop_instance:
        _ui(ds, TAG_AFFECTED_SOP_INSTANCE, sop_instance)
    for tag, value in (counters or {}).items():
        _us(ds, tag, value)
    return ds


def encode_command(command: DataSet) -> bytes:
    """Implicit VR LE with the group length element prepended."""
    body = encode_dataset(command, IMPLICIT_VR_LE)
    group_length = DataElement.from_ints(TAG_GROUP_LENGTH, VR.UL, len(body))
    return encode_dataset(DataSet.of(group_length), IMPLICIT_VR_LE) + body


def decode_command(data: bytes) -> DataSet:
    return parse_dataset(data, IMPLICIT_VR_LE)


# --- fragmentation and reassembly --------------------------------------------

def fragment(context_id: int, payload: bytes, *, is_command: bool,
             max_pdu_length: int) -> list[PDataTf]:
    """Split a payload into P-DATA-TF PDUs within the peer's PDU limit."""
    chunk_size = max_pdu_length - 6
    if chunk_size <= 0:
        raise ProtocolError(f"max PDU length too small: {max_pdu_length}")
    pdus = []
    offset = 0
    while True:
        chunk = payload[offset:offset + chunk_size]
        offset += len(chunk)
        last = offset >= len(payload)
        pdus.append(PDataTf((Pdv(context_id, chunk, is_command=is_command,
                                 is_last=last),)))
        if last:
            break
    return pdus


class MessageAssembler:
    """Reassemble DIMSE messages from a PDV stream.

    `syntax_for` maps a presentation-context id to the accepted transfer
    syntax used to decode data set fragments.
    """

    def __init__(self, syntax_for: Callable[[int], str]):
        self._syntax_for = syntax_for
        self._context_id: int | None = None
        self._command_bytes = bytearray()
        self._command: DataSet | None = None
        self._data_bytes = bytearray()

    def feed(self, pdv: Pdv) -> DimseMessage | None:
        if self._context_id is None:
            self._context_id = pdv.context_id
        elif pdv.context_id != self._context_id:
            raise ProtocolError("interleaved PDVs from different contexts")

        if pdv.is_command:
            if self._command is not None:
                raise ProtocolError("command fragment after the command ended")
            self._command_bytes += pdv.data
            if not pdv.is_last:
                return None
            self._command = decode_command(bytes(self._command_bytes))
            if self._command.int_value(TAG_DATA_SET_TYPE) == NO_DATA_SET:
                return self._finish(data=None)
            return None

        if self._command is None:
            raise ProtocolError("data fragment before any command set")
        self._data_bytes += pdv.data
        if not pdv.is_last:
            return None
        syntax = self._syntax_for(pdv.context_id)
        return self._finish(data=parse_dataset(bytes(self._data_bytes), syntax))

    def _finish(self, data: DataSet | None) -> DimseMessage:
        message = DimseMessage(self._command, data, self._context_id)
        self._context_id = None
        self._command = None
        self._command_bytes = bytearray()
        self._data_bytes = bytearray()
        return message
