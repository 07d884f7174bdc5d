"""Exception types for numeric failures.

Anything raised as `RQITError` means a computation could not be carried out
at the requested accuracy (truncation, positivity, size or chart limits),
as opposed to a plain misuse of the API, which raises the usual built-ins
(ValueError, IndexError).
"""


class RQITError(Exception):
    """Base class for numeric failures."""


class SizeError(RQITError):
    """A tensor product would exceed the configured entry cap."""


class NotPSDError(RQITError):
    """An operator required to be positive semi-definite is not."""


class TruncationError(RQITError):
    """The Fock cutoff is insufficient for the requested tolerance."""


class InvalidBlochError(RQITError):
    """A Bloch vector lies outside the unit ball."""


class BoundaryError(RQITError):
    """A state-space evaluation too close to the pure-state boundary."""


class ChartError(RQITError):
    """A polar-chart evaluation at or too close to a coordinate singularity."""
