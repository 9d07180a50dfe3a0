"""Exception hierarchy for the registry.

Every error carries a short ``code`` (used verbatim in CLI error lines) and the
process exit code the CLI maps it to.
"""

from __future__ import annotations


class SplError(Exception):
    """Base class for all registry errors."""

    code = "Error"
    exit_code = 1

    def __init__(self, detail: str = "") -> None:
        super().__init__(detail)
        self.detail = detail


class InvalidId(SplError):
    code = "InvalidId"


class DuplicateId(SplError):
    code = "DuplicateId"


class UnknownNode(SplError):
    code = "UnknownNode"


class KindMismatch(SplError):
    code = "KindMismatch"


class DuplicateEntry(SplError):
    code = "DuplicateEntry"


class InUse(SplError):
    """Raised when removing a component that products still reference."""

    code = "InUse"

    def __init__(self, node_id: str, users: list[str]) -> None:
        super().__init__(" ".join(users))
        self.node_id = node_id
        self.users = users


class InvalidTree(SplError):
    code = "InvalidTree"


class InvalidRecord(SplError):
    code = "InvalidRecord"


class NoMetadata(SplError):
    code = "NoMetadata"


class ParseError(SplError):
    code = "ParseError"
    exit_code = 3


class SchemaError(SplError):
    """A well-formed document that breaks the tree grammar."""

    code = "SchemaError"
    exit_code = 3

    def __init__(self, detail: str, issues: list | None = None) -> None:
        super().__init__(detail)
        self.issues = issues or []


class DanglingReference(SchemaError):
    code = "DanglingReference"


class StoreError(SplError):
    """Missing, unreadable or already-existing store files."""

    code = "StoreError"
    exit_code = 3
