"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: validation errors exit 2,
numerical errors exit 3, statistical inconsistencies exit 4.
"""


class ReebsysError(Exception):
    """Base class for all package errors."""


class ValidationError(ReebsysError):
    """Invalid input data, configuration, or domain violation."""


class NumericalError(ReebsysError):
    """A numerical routine failed to reach its tolerance."""


class ResolutionError(NumericalError):
    """A limit estimate could not be resolved within the given horizon."""


class CoverageError(NumericalError):
    """An orbit-set construction left part of parameter space uncovered."""


class StatisticalError(ReebsysError):
    """A Monte Carlo consistency check failed beyond its z threshold."""
