"""Exception hierarchy for fracwave.

Every error raised on purpose by the library derives from :class:`FracwaveError`.
Subclasses keep the offending values as attributes so callers (and the CLI
report writer) can inspect them without parsing messages.

Example::

    >>> from fracwave.errors import OrderError
    >>> try:
    ...     raise OrderError(0.5, "integral", "2*alpha must not be an integer")
    ... except OrderError as e:
    ...     print(e.route, e.alpha)
    integral 0.5
"""

from __future__ import annotations


class FracwaveError(Exception):
    """Base class for all fracwave errors."""


class GridError(FracwaveError):
    """Invalid grid, field shape or field contents."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Grid error: {reason}")


class FieldFormatError(FracwaveError):
    """A field file could not be parsed."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"Malformed field file {path}: {reason}")


class DomainError(FracwaveError):
    """Special-function argument outside the supported domain."""

    def __init__(self, function: str, argument: object, reason: str) -> None:
        self.function = function
        self.argument = argument
        self.reason = reason
        super().__init__(f"{function}({argument}): {reason}")


class OrderError(FracwaveError):
    """Fractional order not admissible for the selected route."""

    def __init__(self, alpha: float, route: str, reason: str) -> None:
        self.alpha = alpha
        self.route = route
        self.reason = reason
        super().__init__(f"alpha={alpha} rejected by {route} route: {reason}")


class HermitianError(FracwaveError):
    """Spectrum is not Hermitian although a real field was requested."""

    def __init__(self, residual: float, tolerance: float) -> None:
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"Imaginary residue {residual:.3e} exceeds {tolerance:.1e} of the output norm"
        )


class ConvergenceError(FracwaveError):
    """A quadrature, extrapolation or fit did not reach its tolerance."""

    def __init__(self, what: str, indicator: float, tolerance: float) -> None:
        self.what = what
        self.indicator = indicator
        self.tolerance = tolerance
        super().__init__(
            f"{what} did not converge: indicator {indicator:.3e} > tolerance {tolerance:.1e}"
        )


class StabilityError(FracwaveError):
    """Time step violates the stability limit of the explicit solver."""

    def __init__(self, dt: float, limit: float) -> None:
        self.dt = dt
        self.limit = limit
        super().__init__(f"CFL violation: dt={dt:.4g} exceeds stable limit {limit:.4g}")


class ConfigError(FracwaveError):
    """Invalid run configuration."""

    def __init__(self, key: str, reason: str) -> None:
        self.key = key
        self.reason = reason
        super().__init__(f"Config error at '{key}': {reason}")


class ReportError(FracwaveError):
    """Malformed or incompatible validation report."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"Report {path}: {reason}")


class ParameterError(FracwaveError):
    """A numerical parameter is outside its admissible range."""

    def __init__(self, name: str, value: object, reason: str) -> None:
        self.name = name
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid {name}={value}: {reason}")
