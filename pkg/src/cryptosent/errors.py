"""Shared exception types."""


class CryptosentError(Exception):
    """Base class for every error raised by this package."""


class DataError(CryptosentError):
    """Malformed or contract-violating input data (files, corpora, labels, days)."""


class NumericError(CryptosentError):
    """Numeric failure: singular systems, non-finite values, failed gradient checks."""
