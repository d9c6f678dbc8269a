"""Error type shared by every module."""

from __future__ import annotations

CODES = frozenset(
    {"schema", "partition", "reserved-id", "domain", "precondition", "usage", "budget"}
)


class ModelError(ValueError):
    """Raised on malformed models or violated operation preconditions.

    `code` is one of CODES; `path` anchors loader diagnostics in the JSON
    document (for example ``$.transitions[3].label``).
    """

    def __init__(self, code: str, message: str, path: str | None = None):
        if code not in CODES:
            raise ValueError(f"unknown error code {code!r}")
        self.code = code
        self.message = message
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(f"[{code}] {where}{message}")
