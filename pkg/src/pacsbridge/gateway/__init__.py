"""Authenticated gateway service, persistence and the CLI."""

from .auth import AuthError, AuthorizationError, ConflictError, Session, UserRecord
from .core import Gateway, UnknownStationError, default_data_dir, resolve_tag
from .jobs import JobManager, RetrieveJob
from .previews import NotRetrievedError, PreviewManager
from .settings import Preferences, SettingsStore

__all__ = [
    "AuthError",
    "AuthorizationError",
    "ConflictError",
    "Gateway",
    "JobManager",
    "NotRetrievedError",
    "Preferences",
    "PreviewManager",
    "RetrieveJob",
    "Session",
    "SettingsStore",
    "UnknownStationError",
    "UserRecord",
    "default_data_dir",
    "resolve_tag",
]
