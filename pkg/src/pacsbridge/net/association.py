"""Association establishment and the message channel shared by SCU and SCP."""

from __future__ import annotations

import socket
from dataclasses import dataclass
from typing import Sequence

from ..dicom import DataSet, uids
from .errors import (
    AssociationAbortedError,
    AssociationRejectedError,
    AssociationStateError,
    ConnectError,
    DimseTimeoutError,
    NoAcceptedContextError,
    ProtocolError,
)
from .messages import DimseMessage, MessageAssembler, encode_command, fragment
from .pdu import (
    Abort,
    AssociateAc,
    AssociateRj,
    AssociateRq,
    PDataTf,
    ProposedContext,
    ReleaseRp,
    ReleaseRq,
    read_pdu,
    send_pdu,
)

DEFAULT_MAX_PDU_LENGTH = 16384
DEFAULT_CONNECT_TIMEOUT = 5.0
DEFAULT_DIMSE_TIMEOUT = 30.0


@dataclass
class PresentationContext:
    id: int
    abstract_syntax: str
    transfer_syntaxes: tuple[str, ...]
    accepted_syntax: str | None = None

    def __post_init__(self):
        if self.id % 2 == 0 or not 1 <= self.id <= 255:
            raise ValueError(f"presentation context id must be odd 1..255: {self.id}")
        if self.accepted_syntax is not None and \
                self.accepted_syntax not in self.transfer_syntaxes:
            raise ValueError("accepted syntax is not among the proposed ones")


def default_contexts(*abstract_syntaxes: str) -> list[PresentationContext]:
    """One context per service, proposing both native transfer syntaxes."""
    return [
        PresentationContext(2 * i + 1, syntax, uids.SUPPORTED_TRANSFER_SYNTAXES)
        for i, syntax in enumerate(abstract_syntaxes)
    ]


def _validate_ae(title: str, what: str) -> str:
    title = title.strip()
    if not title or len(title) > 16:
        raise ValueError(f"{what} must be 1..16 characters: {title!r}")
    return title


class DimseChannel:
    """Sends and receives whole DIMSE messages over an open socket."""

    def __init__(self, sock: socket.socket, syntax_for, max_peer_pdu: int,
                 dimse_timeout: float):
        self._sock = sock
        self._max_peer_pdu = max_peer_pdu
        self.dimse_timeout = dimse_timeout
        self._assembler = MessageAssembler(syntax_for)
        self._syntax_for = syntax_for

    def send_message(self, context_id: int, command: DataSet,
                     data: DataSet | None = None) -> None:
        from ..dicom import encode_dataset

        for pdu in fragment(context_id, encode_command(command),
                            is_command=True, max_pdu_length=self._max_peer_pdu):
            send_pdu(self._sock, pdu)
        if data is not None:
            payload = encode_dataset(data, self._syntax_for(context_id))
            for pdu in fragment(context_id, payload, is_command=False,
                                max_pdu_length=self._max_peer_pdu):
                send_pdu(self._sock, pdu)

    def read_event(self, timeout: float | None = None,
                   idle_timeout: float | None = None):
        """Next protocol event: ('message', m) | ('release_rq'|'release_rp'|'abort', pdu)."""
        timeout = self.dimse_timeout if timeout is None else timeout
        while True:
            try:
                pdu = read_pdu(self._sock, timeout, idle_timeout)
            except TimeoutError:
                raise DimseTimeoutError(
                    f"no DIMSE traffic within {timeout}s") from None
            if isinstance(pdu, PDataTf):
                for pdv in pdu.pdvs:
                    message = self._assembler.feed(pdv)
                    if message is not None:
                        return ("message", message)
                continue
            if isinstance(pdu, ReleaseRq):
                return ("release_rq", pdu)
            if isinstance(pdu, ReleaseRp):
                return ("release_rp", pdu)
            if isinstance(pdu, Abort):
                return ("abort", pdu)
            raise ProtocolError(f"unexpected {type(pdu).__name__} mid-association")


class Association:
    """An established SCU-side association."""

    def __init__(self, sock: socket.socket, calling_ae: str, called_ae: str,
                 contexts: dict[int, PresentationContext], max_peer_pdu: int,
                 dimse_timeout: float):
        self.calling_ae = calling_ae
        self.called_ae = called_ae
        self.contexts = contexts
        self.max_pdu_length = max_peer_pdu
        self.state = "established"
        self._sock = sock
        self._next_message_id = 1
        self.channel = DimseChannel(sock, self._syntax_for, max_peer_pdu,
                                    dimse_timeout)

    def _syntax_for(self, context_id: int) -> str:
        ctx = self.contexts.get(context_id)
        if ctx is None or ctx.accepted_syntax is None:
            raise ProtocolError(f"no accepted context with id {context_id}")
        return ctx.accepted_syntax

    def context_for(self, abstract_syntax: str) -> PresentationContext:
        for ctx in self.contexts.values():
            if ctx.abstract_syntax == abstract_syntax and ctx.accepted_syntax:
                return ctx
        raise NoAcceptedContextError(abstract_syntax)

    def next_message_id(self) -> int:
        value = self._next_message_id
        self._next_message_id = (self._next_message_id % 0xFFFF) + 1
        return value

    def require_established(self) -> None:
        if self.state != "established":
            raise AssociationStateError(f"association is {self.state}")

    def send_message(self, context_id: int, command: DataSet,
                     data: DataSet | None = None) -> None:
        self.require_established()
        self.channel.send_message(context_id, command, data)

    def read_response(self) -> DimseMessage:
        kind, payload = self.channel.read_event()
        if kind == "message":
            return payload
        if kind == "abort":
            self.state = "aborted"
            self._close_socket()
            raise AssociationAbortedError(
                f"peer aborted (source={payload.source}, reason={payload.reason})")
        self.state = "aborted"
        self._close_socket()
        raise ProtocolError(f"unexpected {kind} while awaiting a response")

    def release(self) -> None:
        """Orderly release; tolerates a peer that just drops the socket."""
        if self.state != "established":
            return
        try:
            send_pdu(self._sock, ReleaseRq())
            while True:
                kind, _ = self.channel.read_event()
                if kind == "release_rp":
                    break
        except (OSError, AssociationAbortedError, DimseTimeoutError):
            pass
        finally:
            self.state = "released"
            self._close_socket()

    def abort(self) -> None:
        if self.state == "established":
            try:
                send_pdu(self._sock, Abort(source=0, reason=0))
            except OSError:
                pass
        self.state = "aborted"
        self._close_socket()

    def _close_socket(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass

    def __enter__(self) -> "Association":
        return self

    def __exit__(self, *exc) -> None:
        if self.state == "established":
            self.release()


def associate(host: str, port: int, *, called_ae: str, calling_ae: str,
              contexts: Sequence[PresentationContext],
              connect_timeout: float = DEFAULT_CONNECT_TIMEOUT,
              dimse_timeout: float = DEFAULT_DIMSE_TIMEOUT,
              max_pdu_length: int = DEFAULT_MAX_PDU_LENGTH,
              implementation_class_uid: str = uids.IMPLEMENTATION_CLASS_UID,
              implementation_version_name: str = uids.IMPLEMENTATION_VERSION_NAME,
              ) -> Association:
    """Negotiate an association; raises before any I/O on bad arguments."""
    called_ae = _validate_ae(called_ae, "called AE title")
    calling_ae = _validate_ae(calling_ae, "calling AE title")
    if not contexts:
        raise ValueError("at least one presentation context is required")
    if connect_timeout <= 0:
        raise ValueError("connect timeout must be positive")
    ids = [ctx.id for ctx in contexts]
    if len(set(ids)) != len(ids):
        raise ValueError("presentation context ids must be unique")

    request = AssociateRq(
        called_ae=called_ae,
        calling_ae=calling_ae,
        contexts=tuple(ProposedContext(c.id, c.abstract_syntax,
                                       tuple(c.transfer_syntaxes))
                       for c in contexts),
        max_pdu_length=max_pdu_length,
        implementation_class_uid=implementation_class_uid,
        implementation_version_name=implementation_version_name,
    )

    try:
        sock = socket.create_connection((host, port), timeout=connect_timeout)
    except OSError as exc:
        raise ConnectError(f"cannot connect to {host}:{port}: {exc}") from exc

    try:
        sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        send_pdu(sock, request)
        try:
            answer = read_pdu(sock, dimse_timeout)
        except TimeoutError:
            raise DimseTimeoutError(
                f"no association answer within {dimse_timeout}s") from None
    except Exception:
        sock.close()
        raise

    if isinstance(answer, AssociateRj):
        sock.close()
        raise AssociationRejectedError(answer.result, answer.source, answer.reason)
    if isinstance(answer, Abort):
        sock.close()
        raise AssociationAbortedError("peer aborted during negotiation")
    if not isinstance(answer, AssociateAc):
        sock.close()
        raise ProtocolError(f"expected A-ASSOCIATE-AC, got {type(answer).__name__}")

    by_id = {c.id: PresentationContext(c.id, c.abstract_syntax,
                                       tuple(c.transfer_syntaxes))
             for c in contexts}
    for result in answer.results:
        ctx = by_id.get(result.id)
        if ctx is None:
            sock.close()
            raise ProtocolError(f"AC names unknown context id {result.id}")
        if result.result == 0:
            if result.transfer_syntax not in ctx.transfer_syntaxes:
                sock.close()
                raise ProtocolError(
                    f"AC accepted context {result.id} with a syntax that was "
                    f"never proposed: {result.transfer_syntax!r}")
            ctx.accepted_syntax = result.transfer_syntax

    return Association(sock, calling_ae, called_ae, by_id,
                       max_peer_pdu=answer.max_pdu_length,
                       dimse_timeout=dimse_timeout)
