"""Exception hierarchy shared by all modules."""


class ABPhaseError(Exception):
    """Base class for every error raised by this package."""


class UnitError(ABPhaseError, ValueError):
    """Unknown dimension tag or malformed unit string."""


class SingularPointError(ABPhaseError, ValueError):
    """A field or gauge function was queried on its singular set."""


class DegenerateStateError(ABPhaseError, ValueError):
    """Mechanical momentum vanished, so the wavelength is undefined."""


class PreconditionError(ABPhaseError, ValueError):
    """Inputs violate an operation's precondition."""


class LowContrastError(ABPhaseError, ValueError):
    """Fringe carrier is too weak to extract a phase."""


class ConfigurationError(ABPhaseError, ValueError):
    """Invalid configuration (includes violated numerical contracts)."""


class ClippedSupportError(ConfigurationError):
    """Wavepacket support does not fit inside the grid."""


class IncompleteRunError(ABPhaseError, RuntimeError):
    """Simulation ended before the packet finished crossing the screen."""
