"""User store with SHA-256 password hashes and opaque session tokens.

The hash scheme is deliberately plain (no salt); see the README's
security note. Lookup failures and wrong passwords raise the same
opaque error so usernames cannot be enumerated.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import os
import secrets
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from threading import Lock

SESSION_TTL_S = 8 * 3600

# Compared against when the username is unknown, to keep timing uniform.
_DUMMY_HASH = hashlib.sha256(b"\x00").hexdigest()


class AuthError(Exception):
    """Authentication failed (wrong user or password; indistinguishable)."""

    def __init__(self):
        super().__init__("invalid credentials")


class AuthorizationError(Exception):
    """Authenticated but not allowed."""


class ConflictError(Exception):
    """Resource already exists."""


@dataclass(frozen=True)
class UserRecord:
    username: str
    password_hash: str  # 64 lowercase hex chars
    role: str  # "admin" | "user"
    created_at: float


@dataclass(frozen=True)
class Session:
    token: str
    username: str
    role: str
    expires_at: float


def hash_password(password: str) -> str:
    return hashlib.sha256(password.encode("utf-8")).hexdigest()


def _atomic_write(path: Path, payload: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as tmp:
            tmp.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


class UserStore:
    def __init__(self, path: Path):
        self._path = Path(path)
        self._lock = Lock()
        self._users: dict[str, UserRecord] = {}
        self._load()

    def _load(self) -> None:
        if not self._path.exists():
            return
        doc = json.loads(self._path.read_text())
        for entry in doc.get("users", []):
            record = UserRecord(entry["username"], entry["password_hash"],
                                entry["role"], entry["created_at"])
            self._users[record.username] = record

    def _save(self) -> None:
        doc = {"users": [vars(u) for u in self._users.values()]}
        _atomic_write(self._path, json.dumps(doc, indent=2))

    def ensure_admin(self, password: str | None) -> str | None:
        """Create the admin account on first run; returns the generated
        password when none was supplied, else None."""
        with self._lock:
            if "admin" in self._users:
                return None
            generated = None
            if not password:
                generated = secrets.token_urlsafe(12)
                password = generated
            self._users["admin"] = UserRecord("admin", hash_password(password),
                                              "admin", time.time())
            self._save()
            return generated

    def create(self, username: str, password: str, role: str = "user") -> UserRecord:
        username = username.strip()
        if not username:
            raise ValueError("username must not be empty")
        if not password:
            raise ValueError("password must not be empty")
        if role not in ("admin", "user"):
            raise ValueError(f"unknown role {role!r}")
        with self._lock:
            if username in self._users:
                raise ConflictError(f"username {username!r} is taken")
            record = UserRecord(username, hash_password(password), role, time.time())
            self._users[username] = record
            self._save()
            return record

    def verify(self, username: str, password: str) -> UserRecord:
        record = self._users.get(username)
        stored = record.password_hash if record is not None else _DUMMY_HASH
        if not hmac.compare_digest(stored, hash_password(password)) or record is None:
            raise AuthError()
        return record

    def get(self, username: str) -> UserRecord | None:
        return self._users.get(username)

    def usernames(self) -> list[str]:
        return sorted(self._users)


class SessionStore:
    def __init__(self, ttl_s: float = SESSION_TTL_S):
        self._ttl_s = ttl_s
        self._lock = Lock()
        self._sessions: dict[str, Session] = {}

    def issue(self, user: UserRecord) -> Session:
        session = Session(secrets.token_hex(32), user.username, user.role,
                          time.time() + self._ttl_s)
        with self._lock:
            self._sessions[session.token] = session
        return session

    def resolve(self, token: str | None) -> Session | None:
        if not token:
            return None
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                return None
            if session.expires_at <= time.time():
                del self._sessions[token]
                return None
            return session

    def revoke(self, token: str) -> None:
        with self._lock:
            self._sessions.pop(token, None)

    def expire_now(self, token: str) -> None:
        """Test hook: force a session to be expired."""
        with self._lock:
            session = self._sessions.get(token)
            if session is not None:
                self._sessions[token] = Session(session.token, session.username,
                                                session.role, time.time() - 1)
