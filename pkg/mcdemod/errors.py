class McdemodError(Exception):
    """Base class for every error raised by the package."""


class ConfigurationError(McdemodError):
    """A configuration or parameter set was rejected."""


class ScheduleGapError(ConfigurationError):
    """A clamp schedule does not tile [0, horizon]."""


class DataFormatError(ConfigurationError):
    """An input time-series file is malformed."""


class SimulationError(McdemodError):
    """A simulation stage failed."""


class PropensityOverflowError(SimulationError):
    """Total propensity became non-finite; the rate constants are ill-conditioned."""


class IntegrationError(SimulationError):
    """A fixed-step integration kept producing negative states after refinement."""


class RunFailedError(SimulationError):
    def __init__(self, symbol: int, run: int, cause: BaseException) -> None:
        super().__init__(f"run {run} of symbol {symbol} failed: {cause}")
        self.symbol = symbol
        self.run = run


class FilterDomainError(McdemodError):
    """A filter needs log or ratio of a non-positive signal."""


class UnboundedMeanError(McdemodError):
    """The mean-field system has no absorbing channel; the steady state is unbounded."""


class AmbiguousAnnihilationError(McdemodError):
    """Three or more species coexist under infinitely fast annihilation."""
