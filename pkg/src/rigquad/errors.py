"""Exception hierarchy.

The CLI maps each family onto an exit code: parse errors exit 2, geometry
errors exit 3, convergence errors exit 4.
"""


class RigError(Exception):
    """Base class for all errors raised by rigquad."""

    exit_code = 1
    kind = "error"


class ParseError(RigError, ValueError):
    exit_code = 2
    kind = "parse"


class GeometryError(RigError):
    """A critical point sits on, or too close to, a path or disk."""

    exit_code = 3
    kind = "geometry"


class ConvergenceError(RigError):
    """An iteration failed to converge at the working precision."""

    exit_code = 4
    kind = "convergence"


class RootFindingError(ConvergenceError):
    pass


class ContinuationError(ConvergenceError):
    pass
