"""DICOM upper-layer PDUs: encoding, decoding and socket framing.

Every PDU is 1 byte type, 1 reserved byte, a 4-byte big-endian body
length, then the body. Variable items inside the association PDUs use
1 byte type, 1 reserved byte and a 2-byte big-endian length.
"""

from __future__ import annotations

import socket
import struct
from dataclasses import dataclass

from ..dicom import uids
from .errors import AssociationAbortedError, ProtocolError

PDU_ASSOCIATE_RQ = 0x01
PDU_ASSOCIATE_AC = 0x02
PDU_ASSOCIATE_RJ = 0x03
PDU_P_DATA_TF = 0x04
PDU_RELEASE_RQ = 0x05
PDU_RELEASE_RP = 0x06
PDU_ABORT = 0x07

_ITEM_APPLICATION_CONTEXT = 0x10
_ITEM_PRESENTATION_CONTEXT_RQ = 0x20
_ITEM_PRESENTATION_CONTEXT_AC = 0x21
_ITEM_ABSTRACT_SYNTAX = 0x30
_ITEM_TRANSFER_SYNTAX = 0x40
_ITEM_USER_INFORMATION = 0x50
_ITEM_MAX_LENGTH = 0x51
_ITEM_IMPLEMENTATION_UID = 0x52
_ITEM_IMPLEMENTATION_VERSION = 0x55

CONTEXT_ACCEPTED = 0
CONTEXT_REJECTED_USER = 1
CONTEXT_REJECTED_NO_REASON = 2
CONTEXT_REJECTED_ABSTRACT_SYNTAX = 3
CONTEXT_REJECTED_TRANSFER_SYNTAXES = 4


@dataclass(frozen=True)
class ProposedContext:
    id: int
    abstract_syntax: str
    transfer_syntaxes: tuple[str, ...]


@dataclass(frozen=True)
class ContextResult:
    id: int
    result: int
    transfer_syntax: str = ""


@dataclass(frozen=True)
class AssociateRq:
    called_ae: str
    calling_ae: str
    contexts: tuple[ProposedContext, ...]
    max_pdu_length: int = 16384
    implementation_class_uid: str = uids.IMPLEMENTATION_CLASS_UID
    implementation_version_name: str = uids.IMPLEMENTATION_VERSION_NAME
    application_context: str = uids.APPLICATION_CONTEXT
    pdu_type = PDU_ASSOCIATE_RQ


@dataclass(frozen=True)
class AssociateAc:
    called_ae: str
    calling_ae: str
    results: tuple[ContextResult, ...]
    max_pdu_length: int = 16384
    implementation_class_uid: str = uids.IMPLEMENTATION_CLASS_UID
    implementation_version_name: str = uids.IMPLEMENTATION_VERSION_NAME
    application_context: str = uids.APPLICATION_CONTEXT
    pdu_type = PDU_ASSOCIATE_AC


@dataclass(frozen=True)
class AssociateRj:
    result: int
    source: int
    reason: int
    pdu_type = PDU_ASSOCIATE_RJ


@dataclass(frozen=True)
class Pdv:
    context_id: int
    data: bytes
    is_command: bool
    is_last: bool


@dataclass(frozen=True)
class PDataTf:
    pdvs: tuple[Pdv, ...]
    pdu_type = PDU_P_DATA_TF


@dataclass(frozen=True)
class ReleaseRq:
    pdu_type = PDU_RELEASE_RQ


@dataclass(frozen=True)
class ReleaseRp:
    pdu_type = PDU_RELEASE_RP


@dataclass(frozen=True)
class Abort:
    source: int = 0
    reason: int = 0
    pdu_type = PDU_ABORT


Pdu = AssociateRq | AssociateAc | AssociateRj | PDataTf | ReleaseRq | ReleaseRp | Abort


def _ae_bytes(title: str) -> bytes:
    raw = title.encode("ascii")
    if not 0 < len(raw) <= 16:
        raise ProtocolError(f"AE title must be 1..16 characters: {title!r}")
    return raw.ljust(16)


def _item(item_type: int, body: bytes) -> bytes:
    return struct.pack(">BBH", item_type, 0, len(body)) + body


def _uid_item(item_type: int, uid: str) -> bytes:
    return _item(item_type, uid.encode("ascii"))


def _user_information(max_pdu: int, impl_uid: str, impl_version: str) -> bytes:
    body = struct.pack(">BBHI", _ITEM_MAX_LENGTH, 0, 4, max_pdu)
    body += _uid_item(_ITEM_IMPLEMENTATION_UID, impl_uid)
    if impl_version:
        body += _uid_item(_ITEM_IMPLEMENTATION_VERSION, impl_version)
    return _item(_ITEM_USER_INFORMATION, body)


def encode_pdu(pdu: Pdu) -> bytes:
    body = _encode_body(pdu)
    return struct.pack(">BBI", pdu.pdu_type, 0, len(body)) + body


def _encode_body(pdu: Pdu) -> bytes:
    if isinstance(pdu, AssociateRq):
        items = _uid_item(_ITEM_APPLICATION_CONTEXT, pdu.application_context)
        for ctx in pdu.contexts:
            sub = _uid_item(_ITEM_ABSTRACT_SYNTAX, ctx.abstract_syntax)
            for ts in ctx.transfer_syntaxes:
                sub += _uid_item(_ITEM_TRANSFER_SYNTAX, ts)
            items += _item(_ITEM_PRESENTATION_CONTEXT_RQ,
                           struct.pack(">BBBB", ctx.id, 0, 0, 0) + sub)
        items += _user_information(pdu.max_pdu_length, pdu.implementation_class_uid,
                                   pdu.implementation_version_name)
        return (struct.pack(">HH", 1, 0) + _ae_bytes(pdu.called_ae)
                + _ae_bytes(pdu.calling_ae) + b"\x00" * 32 + items)

    if isinstance(pdu, AssociateAc):
        items = _uid_item(_ITEM_APPLICATION_CONTEXT, pdu.application_context)
        for res in pdu.results:
            sub = _uid_item(_ITEM_TRANSFER_SYNTAX, res.transfer_syntax)
            items += _item(_ITEM_PRESENTATION_CONTEXT_AC,
                           struct.pack(">BBBB", res.id, 0, res.result, 0) + sub)
        items += _user_information(pdu.max_pdu_length, pdu.implementation_class_uid,
                                   pdu.implementation_version_name)
        return (struct.pack(">HH", 1, 0) + _ae_bytes(pdu.called_ae)
                + _ae_bytes(pdu.calling_ae) + b"\x00" * 32 + items)

    if isinstance(pdu, AssociateRj):
        return struct.pack(">BBBB", 0, pdu.result, pdu.source, pdu.reason)

    if isinstance(pdu, PDataTf):
        out = bytearray()
        for pdv in pdu.pdvs:
            control = (0x01 if pdv.is_command else 0x00) | (0x02 if pdv.is_last else 0x00)
            out += struct.pack(">IBB", len(pdv.data) + 2, pdv.context_id, control)
            out += pdv.data
        return bytes(out)

    if isinstance(pdu, (ReleaseRq, ReleaseRp)):
        return b"\x00\x00\x00\x00"

    if isinstance(pdu, Abort):
        return struct.pack(">BBBB", 0, 0, pdu.source, pdu.reason)

    raise ProtocolError(f"cannot encode {type(pdu).__name__}")


def decode_pdu(data: bytes) -> Pdu:
    if len(data) < 6:
        raise ProtocolError(f"PDU shorter than its 6-byte header: {len(data)}")
    pdu_type, _, length = struct.unpack(">BBI", data[:6])
    if len(data) - 6 < length:
        raise ProtocolError(
            f"PDU declares {length} body bytes, only {len(data) - 6} available")
    return decode_body(pdu_type, data[6:6 + length])


def decode_body(pdu_type: int, body: bytes) -> Pdu:
    if pdu_type in (PDU_ASSOCIATE_RQ, PDU_ASSOCIATE_AC):
        return _decode_associate(pdu_type, body)
    if pdu_type == PDU_ASSOCIATE_RJ:
        _, result, source, reason = struct.unpack(">BBBB", body[:4])
        return AssociateRj(result, source, reason)
    if pdu_type == PDU_P_DATA_TF:
        pdvs = []
        pos = 0
        while pos < len(body):
            if len(body) - pos < 6:
                raise ProtocolError("truncated PDV item")
            (length,) = struct.unpack(">I", body[pos:pos + 4])
            context_id = body[pos + 4]
            control = body[pos + 5]
            data = body[pos + 6:pos + 4 + length]
            if len(data) != length - 2:
                raise ProtocolError("PDV length overruns the PDU body")
            pdvs.append(Pdv(context_id, data,
                            is_command=bool(control & 0x01),
                            is_last=bool(control & 0x02)))
            pos += 4 + length
        return PDataTf(tuple(pdvs))
    if pdu_type == PDU_RELEASE_RQ:
        return ReleaseRq()
    if pdu_type == PDU_RELEASE_RP:
        return ReleaseRp()
    if pdu_type == PDU_ABORT:
        _, _, source, reason = struct.unpack(">BBBB", body[:4])
        return Abort(source, reason)
    raise ProtocolError(f"unknown PDU type 0x{pdu_type:02X}")


def _decode_associate(pdu_type: int, body: bytes) -> Pdu:
    if len(body) < 68:
        raise ProtocolError("association PDU body too short")
    # 2 bytes protocol version, 2 reserved, 16 called AE, 16 calling AE,
    # 32 reserved, then the variable items.
    called = body[4:20].decode("ascii", errors="replace").strip()
    calling = body[20:36].decode("ascii", errors="replace").strip()

    application_context = ""
    contexts: list[ProposedContext] = []
    results: list[ContextResult] = []
    max_pdu = 16384
    impl_uid = ""
    impl_version = ""

    pos = 68
    while pos < len(body):
        if len(body) - pos < 4:
            raise ProtocolError("truncated variable item header")
        item_type, _, length = struct.unpack(">BBH", body[pos:pos + 4])
        item = body[pos + 4:pos + 4 + length]
        if len(item) != length:
            raise ProtocolError("variable item overruns the PDU body")
        pos += 4 + length

        if item_type == _ITEM_APPLICATION_CONTEXT:
            application_context = item.decode("ascii")
        elif item_type == _ITEM_PRESENTATION_CONTEXT_RQ:
            ctx_id = item[0]
            abstract = ""
            syntaxes: list[str] = []
            sub_pos = 4
            while sub_pos < len(item):
                sub_type, _, sub_len = struct.unpack(">BBH", item[sub_pos:sub_pos + 4])
                sub = item[sub_pos + 4:sub_pos + 4 + sub_len]
                if sub_type == _ITEM_ABSTRACT_SYNTAX:
                    abstract = sub.decode("ascii")
                elif sub_type == _ITEM_TRANSFER_SYNTAX:
                    syntaxes.append(sub.decode("ascii"))
                sub_pos += 4 + sub_len
            contexts.append(ProposedContext(ctx_id, abstract, tuple(syntaxes)))
        elif item_type == _ITEM_PRESENTATION_CONTEXT_AC:
            ctx_id, _, result, _ = struct.unpack(">BBBB", item[:4])
            syntax = ""
            if len(item) > 4:
                _, _, sub_len = struct.unpack(">BBH", item[4:8])
                syntax = item[8:8 + sub_len].decode("ascii")
            results.append(ContextResult(ctx_id, result, syntax))
        elif item_type == _ITEM_USER_INFORMATION:
            sub_pos = 0
            while sub_pos < len(item):
                sub_type, _, sub_len = struct.unpack(">BBH", item[sub_pos:sub_pos + 4])
                sub = item[sub_pos + 4:sub_pos + 4 + sub_len]
                if sub_type == _ITEM_MAX_LENGTH:
                    (max_pdu,) = struct.unpack(">I", sub[:4])
                elif sub_type == _ITEM_IMPLEMENTATION_UID:
                    impl_uid = sub.decode("ascii")
                elif sub_type == _ITEM_IMPLEMENTATION_VERSION:
                    impl_version = sub.decode("ascii")
                sub_pos += 4 + sub_len
        # Unknown items are skipped: asynchronous-operations and role
        # negotiation are not supported and may be safely ignored.

    if pdu_type == PDU_ASSOCIATE_RQ:
        return AssociateRq(called, calling, tuple(contexts), max_pdu,
                           impl_uid, impl_version, application_context)
    return AssociateAc(called, calling, tuple(results), max_pdu,
                       impl_uid, impl_version, application_context)


# --- socket framing ---------------------------------------------------------

class IdleTimeout(Exception):
    """No PDU began within the idle window; no bytes were consumed."""


def _recv_exact(sock: socket.socket, n: int, timeout: float | None,
                idle_timeout: float | None = None) -> bytes:
    chunks = bytearray()
    while len(chunks) < n:
        waiting_for_first = idle_timeout is not None and not chunks
        sock.settimeout(idle_timeout if waiting_for_first else timeout)
        try:
            chunk = sock.recv(n - len(chunks))
        except socket.timeout:
            if waiting_for_first:
                raise IdleTimeout() from None
            raise TimeoutError(f"socket read timed out after {timeout}s") from None
        if not chunk:
            raise AssociationAbortedError("peer closed the connection")
        chunks += chunk
    return bytes(chunks)


def read_pdu(sock: socket.socket, timeout: float | None,
             idle_timeout: float | None = None) -> Pdu:
    """Read one framed PDU; idle_timeout bounds the wait for its first byte."""
    header = _recv_exact(sock, 6, timeout, idle_timeout)
    pdu_type, _, length = struct.unpack(">BBI", header)
    body = _recv_exact(sock, length, timeout) if length else b""
    return decode_body(pdu_type, body)


def send_pdu(sock: socket.socket, pdu: Pdu) -> None:
    sock.sendall(encode_pdu(pdu))
