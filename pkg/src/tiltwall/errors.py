"""Shared exception base for mathematical precondition violations.

The CLI maps PreconditionError to exit code 3, keeping it distinct from
usage errors (2) and malformed configuration (4).
"""


class PreconditionError(ValueError):
    """An operation's mathematical precondition was violated."""
