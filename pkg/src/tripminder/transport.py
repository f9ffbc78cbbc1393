"""Record/replay transport for provider calls.

Every outbound request is reduced to a canonical request key; the response
for that key lives at ``<root>/<provider>/<sha256(key)>.resp`` as a status
line followed by the raw body.  A ``.req`` sidecar keeps the key readable
for humans.  Replay is byte-deterministic; recording wraps any live fetch
callable so real adapters can populate the same layout.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

from .errors import ProviderUnavailableError


@dataclass(frozen=True)
class Response:
    status: int
    body: bytes

    @property
    def text(self) -> str:
        return self.body.decode("utf-8")


class Transport(Protocol):
    def get(self, request_key: str) -> Response: ...


def request_digest(request_key: str) -> str:
    return hashlib.sha256(request_key.encode("utf-8")).hexdigest()


def fixture_path(root: Path, provider: str, request_key: str) -> Path:
    return Path(root) / provider / f"{request_digest(request_key)}.resp"


def write_fixture(root: Path, provider: str, request_key: str, response: Response) -> Path:
    """Store a response under the fixture layout (used by recorders and tests)."""
    path = fixture_path(root, provider, request_key)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(f"{response.status}\n".encode("ascii") + response.body)
    path.with_suffix(".req").write_text(request_key + "\n", "utf-8")
    return path


def read_fixture(path: Path) -> Response:
    raw = path.read_bytes()
    head, _, body = raw.partition(b"\n")
    try:
        status = int(head.split()[0])
    except (ValueError, IndexError):
        raise ProviderUnavailableError(f"malformed fixture file {path}") from None
    return Response(status=status, body=body)


class FixtureTransport:
    """Replay-only transport over a recorded fixture directory."""

    def __init__(self, root: Path | str, provider: str):
        self.root = Path(root)
        self.provider = provider

    def get(self, request_key: str) -> Response:
        path = fixture_path(self.root, self.provider, request_key)
        if not path.is_file():
            raise ProviderUnavailableError(
                f"no recorded response for request: {request_key}",
                provider=self.provider,
                fixture=str(path),
            )
        return read_fixture(path)


class RecordingTransport:
    """Record-on-miss transport wrapping a live fetch callable."""

    def __init__(self, root: Path | str, provider: str, fetch: Callable[[str], Response]):
        self.root = Path(root)
        self.provider = provider
        self._fetch = fetch

    def get(self, request_key: str) -> Response:
        path = fixture_path(self.root, self.provider, request_key)
        if path.is_file():
            return read_fixture(path)
        try:
            response = self._fetch(request_key)
        except Exception as exc:
            raise ProviderUnavailableError(
                f"live fetch failed for request: {request_key}", provider=self.provider
            ) from exc
        write_fixture(self.root, self.provider, request_key, response)
        return response
