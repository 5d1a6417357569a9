"""Shared exception base for the package."""


class ZetalinkError(Exception):
    """Base class for all errors raised by this package."""
