"""
Exception hierarchy for lp-certify.

Library code raises these; only the command line converts them into exit
codes (see ``lp_certify.main.run``).
"""

EXIT_OK = 0
EXIT_HYPOTHESES_NOT_MET = 2
EXIT_UNRESOLVED = 3
EXIT_USAGE = 64
EXIT_IO = 74


class LPCertifyError(Exception):
    """Base class for every error raised by lp-certify."""

    exit_code = EXIT_UNRESOLVED


class DomainError(LPCertifyError, ValueError):
    """A parameter lies outside the domain of the operation."""

    exit_code = EXIT_USAGE


class FamilyRangeError(LPCertifyError, IndexError):
    """A coefficient or quotient index is beyond what the family provides."""

    exit_code = EXIT_USAGE


class ConvergenceError(LPCertifyError):
    """No truncation point was found below the configured degree cap."""


class UnresolvedError(LPCertifyError):
    """A sign could not be certified, even after precision escalation."""

    def __init__(self, message: str, value=None, bound=None):
        super().__init__(message)
        self.value = value
        self.bound = bound


class ContourError(LPCertifyError):
    """The contour passes too close to a zero of the function."""

    def __init__(self, message: str, radius=None, suggested_radius=None):
        super().__init__(message)
        self.radius = radius
        self.suggested_radius = suggested_radius


class SolverError(LPCertifyError):
    """Simultaneous root iteration did not converge."""

    def __init__(self, message: str, partial_roots=None, iterations: int = 0):
        super().__init__(message)
        self.partial_roots = list(partial_roots or [])
        self.iterations = iterations


class DegreeError(LPCertifyError):
    """The truncation degree is too small for the requested radius."""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, recommended_degree: int | None = None):
        super().__init__(message)
        self.recommended_degree = recommended_degree


class BracketError(LPCertifyError):
    """A bisection predicate takes the same value at both bracket ends."""


class HypothesesNotMetError(LPCertifyError):
    """An operation was called on a function outside its theorem's hypotheses."""

    exit_code = EXIT_HYPOTHESES_NOT_MET

    def __init__(self, message: str, hypotheses=None):
        super().__init__(message)
        self.hypotheses = list(hypotheses or [])


class UsageError(LPCertifyError):
    """Malformed command line or function descriptor."""

    exit_code = EXIT_USAGE


class ReportIOError(LPCertifyError, OSError):
    """A report could not be written."""

    exit_code = EXIT_IO
