"""Exception hierarchy.

Every error raised for a physically or numerically invalid request derives
from :class:`CrowSenseError`, so the CLI can map them onto a single exit code.
"""


class CrowSenseError(Exception):
    """Base class for all domain errors of the package."""


class ConfigurationError(CrowSenseError, ValueError):
    """Invalid parameter set or configuration file."""


class DomainError(CrowSenseError, ValueError):
    """Argument outside the domain of a function (e.g. frequency off the band)."""


class SingularPointError(DomainError):
    """Evaluation exactly at a band edge, where the self-energy diverges."""


class PoleHitError(CrowSenseError, ZeroDivisionError):
    """Evaluation at (or numerically at) a zero of D(z)."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class DegeneratePoleError(CrowSenseError):
    """Non-simple zero of D(z); residues are undefined."""


class NearResonantDriveError(CrowSenseError):
    """A pole sits so close to the drive frequency that 1/omega_r diverges."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class NoResponseError(CrowSenseError):
    """Signal transfer vanishes at this frequency; sensitivity undefined."""


class ResonanceError(CrowSenseError):
    """Real-axis evaluation within tolerance of a real bound-state pole."""


class ConvergenceError(CrowSenseError):
    """A quadrature or iteration failed to reach the requested accuracy."""


class StiffnessError(CrowSenseError):
    """The time integrator's step size underflowed."""


class MechanicalResonanceError(CrowSenseError, ZeroDivisionError):
    """Lossless mechanical susceptibility evaluated exactly on resonance."""
