class FresnelError(Exception):
    """Base class for every error raised by the Fresnel toolkit."""


class DomainError(FresnelError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class InvalidInputError(DomainError):
    """NaN or infinite argument handed to the evaluator."""


class PlannerError(FresnelError):
    """A plan cannot be built that satisfies its bound invariants."""


class OracleError(FresnelError, RuntimeError):
    """The reference oracle failed to converge; results must not be trusted."""
