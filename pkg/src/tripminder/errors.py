"""Exception hierarchy shared by all pipeline stages.

Every error carries a stable machine-readable ``code`` so the HTTP gateway
and the CLI can map failures without string matching.
"""

from __future__ import annotations

from typing import Any


class TripMinderError(Exception):
    """Base class; ``code`` is part of the public API contract."""

    code = "INTERNAL"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        payload: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class EmptyDocumentError(TripMinderError):
    code = "EMPTY_DOCUMENT"


class NoLocationError(TripMinderError):
    code = "NO_LOCATION"


class NoFutureDateError(TripMinderError):
    code = "NO_FUTURE_DATE"


class EmptyDestinationError(TripMinderError):
    code = "EMPTY_DESTINATION"


class ProviderUnavailableError(TripMinderError):
    code = "PROVIDER_UNAVAILABLE"


class NoResultsError(TripMinderError):
    code = "NO_RESULTS"


class NoForecastError(TripMinderError):
    code = "NO_FORECAST"


class EmptyForecastError(TripMinderError):
    code = "EMPTY_FORECAST"


class EmptyCorpusError(TripMinderError):
    code = "EMPTY_CORPUS"


class FrameTooSmallError(TripMinderError):
    code = "FRAME_TOO_SMALL"


class DimensionMismatchError(TripMinderError):
    code = "DIMENSION_MISMATCH"


class BackendFailureError(TripMinderError):
    code = "BACKEND_FAILURE"


class BadFrameError(TripMinderError):
    code = "BAD_FRAME"


class AlreadyScheduledError(TripMinderError):
    code = "ALREADY_SCHEDULED"


class UnknownItemError(TripMinderError):
    code = "UNKNOWN_ITEM"


class BadStateError(TripMinderError):
    code = "BAD_STATE"


class NoSelectionError(TripMinderError):
    code = "NO_SELECTION"


class TripNotFoundError(TripMinderError):
    code = "TRIP_NOT_FOUND"


class ConsentRequiredError(TripMinderError):
    code = "CONSENT_REQUIRED"


class UnauthorizedError(TripMinderError):
    code = "UNAUTHORIZED"
