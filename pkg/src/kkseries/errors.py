"""Shared exception types for the numerical routines."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of the operation."""


class RegionError(DomainError):
    """The evaluation point lies outside the required convergence strip."""


class DivergenceError(ArithmeticError):
    """A series or integral was detected to diverge for the given inputs."""


class ConsistencyError(ArithmeticError):
    """Two routes that must agree disagreed beyond their combined estimates."""


class IntegrandError(ArithmeticError):
    """An integrand produced a non-finite value at an interior node."""


class GoldenFormatError(ValueError):
    """A golden-vector file failed structural validation."""
