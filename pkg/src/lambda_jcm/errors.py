"""Exception types shared across the simulation modules."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(SimulationError):
    """Physical parameters are invalid or mutually inconsistent."""


class TruncationError(SimulationError):
    """The Fock-space cutoff is too small for the requested computation."""


class GridError(SimulationError):
    """A quadrature grid fails to capture the sampled probability density."""


class StepSizeError(SimulationError):
    """The integrator norm drifted beyond tolerance; a smaller step is needed."""


class UndefinedStatisticError(SimulationError):
    """A statistic has no meaningful value for the current state (e.g. vacuum)."""


class ConfigParseError(SimulationError):
    """A run-configuration document or flag value could not be parsed."""
