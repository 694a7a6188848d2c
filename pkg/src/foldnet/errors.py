"""Shared exception types."""


class FormatError(Exception):
    """A serialized file violates its declared format or schema."""
