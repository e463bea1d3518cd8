"""Exception types shared across the package."""

from __future__ import annotations


class FsaError(Exception):
    """Base class for all package errors."""


class ShapeError(FsaError):
    """Dimension or grid mismatch."""


class NonHermitianError(FsaError):
    """Input fails a required self-adjointness check."""


class ConvergenceError(FsaError):
    """Iterative eigensolver did not reach its stopping rule."""


class DomainViolationError(FsaError):
    """A discontinuity of a spectral function touches the certified spectrum."""


class NormTooLargeError(FsaError):
    """Pipeline precondition ||x|| < 1 is not certified."""


class ObstructionError(FsaError):
    """Level removal is provably impossible within the budget.

    Carries the certificate as ``.certificate``.
    """

    def __init__(self, certificate, message: str | None = None):
        self.certificate = certificate
        super().__init__(message or f"obstructed at level {certificate.level}")


class InconclusiveGridError(FsaError):
    """Neither feasibility nor an obstruction witness; the grid is too coarse."""


class CertificationError(FsaError):
    """A required certificate could not be established on this grid."""


class VerificationError(FsaError):
    """An independent recheck of a report failed.

    ``.check`` names the violated inequality or consistency rule.
    """

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)


class DigestMismatchError(FsaError):
    """Report was produced from a different element than the one supplied."""
