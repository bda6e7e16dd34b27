"""Network-layer error types."""

from __future__ import annotations


class DimseError(Exception):
    """Base class for association and DIMSE failures."""


class ProtocolError(DimseError):
    """Malformed or unexpected PDU / DIMSE traffic."""


class ConnectError(DimseError):
    """TCP connection to the peer failed or timed out."""


class AssociationRejectedError(DimseError):
    """Peer answered the association request with A-ASSOCIATE-RJ."""

    def __init__(self, result: int, source: int, reason: int):
        self.result = result
        self.source = source
        self.reason = reason
        super().__init__(
            f"association rejected (result={result}, source={source}, reason={reason})")


class AssociationAbortedError(DimseError):
    """Peer aborted, or the transport dropped mid-exchange."""


class AssociationStateError(DimseError):
    """Operation attempted outside the established state."""


class NoAcceptedContextError(DimseError):
    """No accepted presentation context for the requested service."""

    def __init__(self, abstract_syntax: str):
        self.abstract_syntax = abstract_syntax
        super().__init__(f"no accepted presentation context for {abstract_syntax}")


class DimseTimeoutError(DimseError):
    """No response within the DIMSE timeout."""


class DimseServiceError(DimseError):
    """Raised by SCP handlers to answer with a specific failure status."""

    def __init__(self, status: int, comment: str = ""):
        self.status = status
        self.comment = comment
        super().__init__(f"service failure status 0x{status:04X}: {comment}")


class MoveDestinationUnknownError(DimseError):
    """C-MOVE refused with status 0xA801 (unknown destination AE)."""

    def __init__(self, outcome):
        self.outcome = outcome
        super().__init__("move destination unknown to the peer (0xA801)")
