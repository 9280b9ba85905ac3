"""Shared exception and warning types."""


class ConfigError(ValueError):
    """A scenario/experiment configuration violates its invariants."""


class NonConvergenceError(ArithmeticError):
    """A series or iterative solver hit its term/iteration cap before
    reaching the requested tolerance."""


class QuadratureAccuracyError(ArithmeticError):
    """A quadrature-based probability left [0, 1] by more than the allowed
    excursion, i.e. the quadrature order is too low for the operating point."""


class SeriesDivergenceError(ArithmeticError):
    """The requested series evaluation point lies outside the convergence
    region (e.g. 2F1 at z = 1 with c - a - b <= 0)."""


class CertainOutageWarning(UserWarning):
    """The power split makes the distant user's outage certain
    (a_m <= gamma_th_m * a_n); the returned probability is exactly 1."""


class ThetaSurrogateWarning(UserWarning):
    """A divergent hypergeometric constant was replaced by its finite
    surrogate evaluated just inside the unit disk; absolute values carry
    no meaning, only the SNR scaling does."""
