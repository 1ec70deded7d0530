"""Exception types shared across the package."""

from __future__ import annotations


class FloerbarError(Exception):
    """Base class for all package errors."""


class InputError(FloerbarError):
    """Malformed or inconsistent input data (parse or validation failure)."""


class NonTransverseError(FloerbarError):
    """A degenerate critical point was found at the given time."""

    def __init__(self, t: float, detail: str = ""):
        self.t = t
        super().__init__(f"non-transverse time t={t!r}" + (f": {detail}" if detail else ""))


class NonGenericError(FloerbarError):
    """A bifurcation that is not a simple birth or death."""

    def __init__(self, t: float, detail: str = ""):
        self.t = t
        super().__init__(f"non-generic event at t={t!r}" + (f": {detail}" if detail else ""))


class HoleOnCurveError(FloerbarError):
    """The marked point lies on one of the curves at the given time."""


class GammaUndefinedError(FloerbarError):
    """Spectral norm requested for a barcode without semi-infinite bars."""


class SlideError(FloerbarError):
    """Handle-slide construction or verification failed."""


class TrackingError(FloerbarError):
    """A barcode-tracking assertion failed along a family.

    Carries the offending time and a machine-readable witness dict.
    """

    def __init__(self, t: float, detail: str, witness: dict | None = None):
        self.t = t
        self.witness = witness or {}
        super().__init__(f"tracking failed at t={t!r}: {detail}")


class SamplingError(FloerbarError):
    """Generator matching between consecutive samples was ambiguous."""
