"""Upper-layer association handling and the DIMSE service subset."""

from .association import (
    Association,
    DEFAULT_CONNECT_TIMEOUT,
    DEFAULT_DIMSE_TIMEOUT,
    DEFAULT_MAX_PDU_LENGTH,
    PresentationContext,
    associate,
    default_contexts,
)
from .errors import (
    AssociationAbortedError,
    AssociationRejectedError,
    AssociationStateError,
    ConnectError,
    DimseError,
    DimseServiceError,
    DimseTimeoutError,
    MoveDestinationUnknownError,
    NoAcceptedContextError,
    ProtocolError,
)
from .messages import Status, StatusClass, classify_status
from .scu import MoveOutcome, c_echo, c_find, c_move, c_store
from .server import Handlers, MoveProgress, MoveResult, ScpContext, ScpHandle, serve

__all__ = [
    "Association",
    "AssociationAbortedError",
    "AssociationRejectedError",
    "AssociationStateError",
    "ConnectError",
    "DEFAULT_CONNECT_TIMEOUT",
    "DEFAULT_DIMSE_TIMEOUT",
    "DEFAULT_MAX_PDU_LENGTH",
    "DimseError",
    "DimseServiceError",
    "DimseTimeoutError",
    "Handlers",
    "MoveDestinationUnknownError",
    "MoveOutcome",
    "MoveProgress",
    "MoveResult",
    "NoAcceptedContextError",
    "PresentationContext",
    "ProtocolError",
    "ScpContext",
    "ScpHandle",
    "Status",
    "StatusClass",
    "associate",
    "c_echo",
    "c_find",
    "c_move",
    "c_store",
    "classify_status",
    "default_contexts",
    "serve",
]
