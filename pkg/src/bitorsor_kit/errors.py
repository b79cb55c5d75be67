"""Shared error root so the CLI can map any domain failure to one exit code."""


class DomainError(Exception):
    """A validated algebraic construction or a declared precondition failed."""
