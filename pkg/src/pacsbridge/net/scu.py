"""Client-side DIMSE operations over an established association."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..dicom import DataSet, Tag, uids
from .association import Association
from .errors import MoveDestinationUnknownError, ProtocolError
from . import messages as m
from .messages import Status

TAG_QUERY_LEVEL = Tag(0x0008, 0x0052)


@dataclass(frozen=True)
class MoveOutcome:
    remaining: int
    completed: int
    failed: int
    warning: int
    status: Status

    @property
    def is_success(self) -> bool:
        return self.status.is_success


def _check_response(message: m.DimseMessage, request_id: int, expected_field: int) -> None:
    if message.command_field != expected_field:
        raise ProtocolError(
            f"expected command field 0x{expected_field:04X}, "
            f"got 0x{message.command_field:04X}")
    if message.message_id_responded != request_id:
        raise ProtocolError(
            f"response answers message {message.message_id_responded}, "
            f"expected {request_id}")


def c_echo(assoc: Association) -> Status:
    """Connectivity check; success is status 0x0000."""
    assoc.require_established()
    ctx = assoc.context_for(uids.VERIFICATION)
    message_id = assoc.next_message_id()
    assoc.send_message(ctx.id, m.echo_rq(message_id, uids.VERIFICATION))
    reply = assoc.read_response()
    _check_response(reply, message_id, m.C_ECHO_RQ | m.RSP_BIT)
    return reply.status


def c_find(assoc: Association, identifier: DataSet,
           on_match: Callable[[DataSet], None]) -> Status:
    """Run a query, invoking on_match per pending result; returns the final status."""
    assoc.require_established()
    if TAG_QUERY_LEVEL not in identifier:
        raise ValueError("identifier lacks (0008,0052) QueryRetrieveLevel")
    ctx = assoc.context_for(uids.STUDY_ROOT_QR_FIND)
    message_id = assoc.next_message_id()
    assoc.send_message(ctx.id, m.find_rq(message_id, uids.STUDY_ROOT_QR_FIND),
                       identifier)
    while True:
        reply = assoc.read_response()
        _check_response(reply, message_id, m.C_FIND_RQ | m.RSP_BIT)
        status = reply.status
        if status.is_pending:
            if reply.data is not None:
                on_match(reply.data)
            continue
        return status


def c_move(assoc: Association, identifier: DataSet, destination_ae: str) -> MoveOutcome:
    """Direct the peer to store matches at destination_ae; returns final counts."""
    assoc.require_established()
    if not destination_ae.strip():
        raise ValueError("destination AE title must not be empty")
    ctx = assoc.context_for(uids.STUDY_ROOT_QR_MOVE)
    message_id = assoc.next_message_id()
    assoc.send_message(ctx.id, m.move_rq(message_id, uids.STUDY_ROOT_QR_MOVE,
                                         destination_ae), identifier)
    remaining = completed = failed = warning = 0
    while True:
        reply = assoc.read_response()
        _check_response(reply, message_id, m.C_MOVE_RQ | m.RSP_BIT)
        remaining = reply.command.int_value(m.TAG_REMAINING, remaining)
        completed = reply.command.int_value(m.TAG_COMPLETED, completed)
        failed = reply.command.int_value(m.TAG_FAILED, failed)
        warning = reply.command.int_value(m.TAG_WARNING, warning)
        status = reply.status
        if status.is_pending:
            continue
        outcome = MoveOutcome(remaining, completed, failed, warning, status)
        if status.code == m.STATUS_MOVE_DESTINATION_UNKNOWN:
            raise MoveDestinationUnknownError(outcome)
        return outcome


def c_store(assoc: Association, sop_class_uid: str, sop_instance_uid: str,
            instance: DataSet) -> Status:
    """Push one instance to the peer over an accepted storage context."""
    assoc.require_established()
    ctx = assoc.context_for(sop_class_uid)
    message_id = assoc.next_message_id()
    assoc.send_message(ctx.id, m.store_rq(message_id, sop_class_uid,
                                          sop_instance_uid), instance)
    reply = assoc.read_response()
    _check_response(reply, message_id, m.C_STORE_RQ | m.RSP_BIT)
    return reply.status
