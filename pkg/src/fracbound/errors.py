"""Exception hierarchy shared by all fracbound modules."""


class FracboundError(Exception):
    """Base class for all errors raised by fracbound."""


class DomainError(FracboundError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(FracboundError, ValueError):
    """A registry spec string or run configuration is malformed."""


class DivergentIntegralError(FracboundError):
    """An integral failed to converge (estimate not shrinking, or the
    integrand is non-finite toward an endpoint)."""


class DivergentBoundError(DivergentIntegralError):
    """A weight integral inside a bound diverges; the bound is infinite."""


class HypothesisError(FracboundError):
    """A bound was requested under hypotheses that are not certified."""
