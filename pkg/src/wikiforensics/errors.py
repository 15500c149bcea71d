"""Exception hierarchy shared across the toolkit.

CLI exit codes map onto these: ConfigError -> 2, DataError -> 3,
FetchError -> 4.
"""

from __future__ import annotations

from dataclasses import dataclass


class WikiForensicsError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(WikiForensicsError):
    """Invalid or unresolvable configuration."""


class DataError(WikiForensicsError):
    """Input data violates a contract (bad file, bad record, bad shape)."""


class SchemaError(DataError):
    """A document is missing or mistypes a required field."""

    def __init__(self, field: str, message: str | None = None):
        self.field = field
        super().__init__(message or f"missing or invalid required field: {field!r}")


class FetchError(WikiForensicsError):
    """Upstream metadata fetch failed; callers may retry."""

    def __init__(self, message: str, retryable: bool = True):
        self.retryable = retryable
        super().__init__(message)


@dataclass
class RecordError:
    """Non-fatal, per-record parse failure inside a streamed file."""

    line: int | None
    offset: int | None
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}" if self.line is not None else f"byte {self.offset}"
        return f"{where}: {self.message}"
