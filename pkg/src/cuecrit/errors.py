"""Exception types shared across the package.

Plain ``ValueError`` is used for bad parameters, domain violations and shape
errors. The classes below exist so callers (the command line tool in
particular) can tell numeric failures apart from statistical insufficiency.
"""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class ResolutionError(RuntimeError):
    """A discretization was too coarse for the requested accuracy."""


class StatisticsError(RuntimeError):
    """Not enough Monte Carlo data to evaluate the requested quantity."""


class CapabilityError(ValueError):
    """The request exceeds what the implementation supports."""


class RegimeWarning(UserWarning):
    """Parameters left the regime where the compared formula is exact."""
