"""DIMSE SCP: accepts associations and dispatches requests to handlers."""

from __future__ import annotations

import logging
import socket
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from ..dicom import DataSet, uids
from .association import DimseChannel
from .errors import AssociationAbortedError, DimseServiceError, ProtocolError
from . import messages as m
from .pdu import (
    Abort,
    AssociateAc,
    AssociateRj,
    AssociateRq,
    ContextResult,
    IdleTimeout,
    ReleaseRp,
    read_pdu,
    send_pdu,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScpContext:
    """Per-request view handed to handlers."""
    calling_ae: str
    called_ae: str
    peer: tuple[str, int]
    context_id: int
    abstract_syntax: str
    transfer_syntax: str
    command: DataSet


@dataclass(frozen=True)
class MoveProgress:
    remaining: int
    completed: int
    failed: int
    warning: int = 0


@dataclass(frozen=True)
class MoveResult:
    status: int
    completed: int
    failed: int
    warning: int = 0


@dataclass
class Handlers:
    on_echo: Callable[[ScpContext], int] | None = None
    on_find: Callable[[ScpContext, DataSet], Iterable[DataSet]] | None = None
    on_store: Callable[[ScpContext, DataSet], int] | None = None
    on_move: Callable[[ScpContext, DataSet, str],
                      Iterator[MoveProgress | MoveResult]] | None = None
    # Return False to reject the association outright.
    on_associate: Callable[[AssociateRq, tuple[str, int]], bool] | None = None

    def supported_abstract_syntaxes(self, storage_classes) -> set[str]:
        supported: set[str] = set()
        if self.on_echo is not None:
            supported.add(uids.VERIFICATION)
        if self.on_find is not None:
            supported.add(uids.STUDY_ROOT_QR_FIND)
        if self.on_move is not None:
            supported.add(uids.STUDY_ROOT_QR_MOVE)
        if self.on_store is not None:
            supported.update(storage_classes)
        return supported


class ScpHandle:
    """Running listener; stop() shuts it down and joins its sessions."""

    def __init__(self, host: str, port: int, local_ae: str):
        self.host = host
        self.port = port
        self.local_ae = local_ae
        self._stop = threading.Event()
        self._listener: socket.socket | None = None
        self._accept_thread: threading.Thread | None = None
        self._sessions: list[_Session] = []
        self._lock = threading.Lock()

    def stop(self) -> None:
        self._stop.set()
        if self._listener is not None:
            try:
                self._listener.close()
            except OSError:
                pass
        with self._lock:
            sessions = list(self._sessions)
        for session in sessions:
            session.close()
        if self._accept_thread is not None:
            self._accept_thread.join(timeout=3)
        for session in sessions:
            session.join(timeout=3)

    def _track(self, session: "_Session") -> None:
        with self._lock:
            self._sessions = [s for s in self._sessions if s.alive] + [session]

    def __enter__(self) -> "ScpHandle":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()


class _Session:
    def __init__(self, sock: socket.socket, peer: tuple[str, int],
                 handle: ScpHandle, handlers: Handlers,
                 storage_classes, dimse_timeout: float, max_pdu_length: int):
        self._sock = sock
        self._peer = peer
        self._handle = handle
        self._handlers = handlers
        self._storage_classes = storage_classes
        self._dimse_timeout = dimse_timeout
        self._max_pdu_length = max_pdu_length
        self._channel: DimseChannel | None = None
        self._contexts: dict[int, tuple[str, str]] = {}  # id -> (abstract, transfer)
        self._calling_ae = ""
        self._called_ae = ""
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name=f"scp-session-{peer[0]}:{peer[1]}")

    # -- lifecycle

    def start(self) -> None:
        self._thread.start()

    def join(self, timeout: float | None = None) -> None:
        self._thread.join(timeout)

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass

    @property
    def alive(self) -> bool:
        return self._thread.is_alive()

    # -- protocol

    def _run(self) -> None:
        try:
            if not self._negotiate():
                return
            self._serve_messages()
        except (AssociationAbortedError, ConnectionError, OSError):
            pass
        except Exception:
            log.exception("association from %s failed; aborting it", self._peer)
            self._abort()
        finally:
            self.close()

    def _negotiate(self) -> bool:
        request = read_pdu(self._sock, self._dimse_timeout)
        if not isinstance(request, AssociateRq):
            raise ProtocolError(f"expected A-ASSOCIATE-RQ, got {type(request).__name__}")
        self._calling_ae = request.calling_ae
        self._called_ae = request.called_ae

        if self._handlers.on_associate is not None and \
                not self._handlers.on_associate(request, self._peer):
            send_pdu(self._sock, AssociateRj(result=1, source=1, reason=1))
            return False

        supported = self._handlers.supported_abstract_syntaxes(self._storage_classes)
        results = []
        for ctx in request.contexts:
            if ctx.abstract_syntax not in supported:
                results.append(ContextResult(ctx.id, 3))
                continue
            chosen = next((ts for ts in ctx.transfer_syntaxes
                           if ts in uids.SUPPORTED_TRANSFER_SYNTAXES), None)
            if chosen is None:
                results.append(ContextResult(ctx.id, 4))
                continue
            results.append(ContextResult(ctx.id, 0, chosen))
            self._contexts[ctx.id] = (ctx.abstract_syntax, chosen)

        send_pdu(self._sock, AssociateAc(
            called_ae=request.called_ae or self._handle.local_ae,
            calling_ae=request.calling_ae,
            results=tuple(results),
            max_pdu_length=self._max_pdu_length,
        ))
        self._channel = DimseChannel(
            self._sock, self._syntax_for,
            max_peer_pdu=request.max_pdu_length,
            dimse_timeout=self._dimse_timeout)
        return True

    def _syntax_for(self, context_id: int) -> str:
        try:
            return self._contexts[context_id][1]
        except KeyError:
            raise ProtocolError(f"P-DATA on unaccepted context {context_id}") from None

    def _serve_messages(self) -> None:
        while not self._handle._stop.is_set():
            try:
                kind, payload = self._channel.read_event(idle_timeout=0.25)
            except IdleTimeout:
                continue
            if kind == "release_rq":
                send_pdu(self._sock, ReleaseRp())
                return
            if kind == "abort":
                return
            self._dispatch(payload)

    def _dispatch(self, message: m.DimseMessage) -> None:
        ctx_id = message.context_id
        abstract, transfer = self._contexts[ctx_id]
        ctx = ScpContext(self._calling_ae, self._called_ae, self._peer,
                         ctx_id, abstract, transfer, message.command)
        field_value = message.command_field
        handlers = self._handlers

        if field_value == m.C_ECHO_RQ and handlers.on_echo is not None:
            status = handlers.on_echo(ctx)
            self._respond(ctx_id, message.command, status)
        elif field_value == m.C_FIND_RQ and handlers.on_find is not None:
            self._handle_find(ctx, message)
        elif field_value == m.C_STORE_RQ and handlers.on_store is not None:
            if message.data is None:
                self._respond(ctx_id, message.command, m.STATUS_UNABLE_TO_PROCESS,
                              comment="C-STORE-RQ carried no data set")
            else:
                status = handlers.on_store(ctx, message.data)
                self._respond(ctx_id, message.command, status)
        elif field_value == m.C_MOVE_RQ and handlers.on_move is not None:
            self._handle_move(ctx, message)
        else:
            self._respond(ctx_id, message.command, m.STATUS_UNRECOGNIZED_OPERATION,
                          comment=f"unsupported command 0x{field_value:04X}")

    def _handle_find(self, ctx: ScpContext, message: m.DimseMessage) -> None:
        identifier = message.data
        if identifier is None:
            self._respond(ctx.context_id, message.command, m.STATUS_UNABLE_TO_PROCESS,
                          comment="C-FIND-RQ carried no identifier")
            return
        try:
            for match in self._handlers.on_find(ctx, identifier):
                self._respond(ctx.context_id, message.command, m.STATUS_PENDING,
                              data=match)
            self._respond(ctx.context_id, message.command, m.STATUS_SUCCESS)
        except DimseServiceError as err:
            self._respond(ctx.context_id, message.command, err.status,
                          comment=err.comment)

    def _handle_move(self, ctx: ScpContext, message: m.DimseMessage) -> None:
        identifier = message.data
        destination = message.command.text(m.TAG_MOVE_DESTINATION)
        if identifier is None or not destination:
            self._respond(ctx.context_id, message.command, m.STATUS_UNABLE_TO_PROCESS,
                          comment="C-MOVE-RQ needs an identifier and a destination")
            return
        final: MoveResult | None = None
        try:
            for step in self._handlers.on_move(ctx, identifier, destination):
                if isinstance(step, MoveResult):
                    final = step
                    break
                self._respond(ctx.context_id, message.command, m.STATUS_PENDING,
                              counters={m.TAG_REMAINING: step.remaining,
                                        m.TAG_COMPLETED: step.completed,
                                        m.TAG_FAILED: step.failed,
                                        m.TAG_WARNING: step.warning})
        except DimseServiceError as err:
            self._respond(ctx.context_id, message.command, err.status,
                          comment=err.comment)
            return
        if final is None:
            final = MoveResult(m.STATUS_UNABLE_TO_PROCESS, 0, 0, 0)
        self._respond(ctx.context_id, message.command, final.status,
                      counters={m.TAG_COMPLETED: final.completed,
                                m.TAG_FAILED: final.failed,
                                m.TAG_WARNING: final.warning})

    def _respond(self, context_id: int, request: DataSet, status: int, *,
                 data: DataSet | None = None, comment: str = "",
                 counters: dict | None = None) -> None:
        command = m.response(request, status, with_data=data is not None,
                             comment=comment, counters=counters)
        self._channel.send_message(context_id, command, data)

    def _abort(self) -> None:
        try:
            send_pdu(self._sock, Abort(source=2, reason=0))
        except OSError:
            pass


def serve(host: str, port: int, local_ae: str, handlers: Handlers, *,
          storage_classes: tuple[str, ...] = uids.STORAGE_SOP_CLASSES,
          dimse_timeout: float = 30.0,
          max_pdu_length: int = 16384) -> ScpHandle:
    """Start listening; returns a handle whose .port is the bound port."""
    if not any((handlers.on_echo, handlers.on_find, handlers.on_store,
                handlers.on_move)):
        raise ValueError("at least one DIMSE handler is required")

    listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    listener.bind((host, port))
    listener.listen(16)
    listener.settimeout(0.2)

    handle = ScpHandle(host, listener.getsockname()[1], local_ae)
    handle._listener = listener

    def accept_loop() -> None:
        while not handle._stop.is_set():
            try:
                sock, peer = listener.accept()
            except socket.timeout:
                continue
            except OSError:
                break
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            session = _Session(sock, peer, handle, handlers, storage_classes,
                               dimse_timeout, max_pdu_length)
            handle._track(session)
            session.start()

    handle._accept_thread = threading.Thread(target=accept_loop, daemon=True,
                                             name=f"scp-accept-{handle.port}")
    handle._accept_thread.start()
    log.info("SCP %s listening on %s:%s", local_ae, handle.host, handle.port)
    return handle
