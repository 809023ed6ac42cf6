"""Exception types raised across the package.

Grouped here so drivers can catch structured failures from any layer
(parameter validation, ring construction, state synthesis, evolution,
measurement) without importing the layer itself.
"""


class GraysolError(Exception):
    """Base class for all package-specific errors."""


class InvalidParamsError(GraysolError):
    """Soliton/background parameters outside the physical domain."""


class ZeroWavenumberError(GraysolError):
    """Quantity undefined at k = 0 requested at k = 0."""


class NoSolutionError(GraysolError):
    """No compatible ring tuning exists for the requested parameters."""


class RootBracketingError(GraysolError):
    """A quantization root could not be bracketed inside its interval."""


class InsufficientSpectrumError(GraysolError):
    """The discrete spectrum does not cover the requested packet band."""


class PacketSpecError(GraysolError):
    """Packet specification violates a synthesis invariant."""


class StepTooLargeError(GraysolError):
    """Compensation phase step exceeds the small-step validity bound."""


class WindingMismatchError(GraysolError):
    """Constructed state failed to preserve the background winding."""


class NumberContractError(GraysolError):
    """Constructed state failed the particle-number budget contract."""


class StabilityError(GraysolError):
    """Requested time step too coarse for the occupied spectral band."""


class InstabilityError(GraysolError):
    """Norm drifted beyond the per-step bound during evolution."""


class SeamCrossingError(GraysolError):
    """Tracked packet mass would reach the ring seam during the run."""


class CheckpointError(GraysolError):
    """Checkpoint file is malformed or from an incompatible version."""


class FitDivergedError(GraysolError):
    """Damped Gauss-Newton failed to converge on the soliton profile."""


class DegenerateWindowError(GraysolError):
    """Fit window contains too few points or no density variation."""


class LowMassError(GraysolError):
    """Centroid requested over a region with insufficient signal mass."""


class ConfigError(GraysolError):
    """Experiment configuration file is invalid."""
