"""
Exception hierarchy for the quantum walk toolkit.
Each error carries the process exit code the CLI reports for it.
"""


class WalkError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1


class ConfigurationError(WalkError, ValueError):
    """Invalid run configuration, walk parameters or ratchet definition."""

    exit_code = 2


class NumericalError(WalkError, ArithmeticError):
    """A computation left the regime where its results can be trusted."""

    exit_code = 3


class TruncationError(NumericalError):
    """Probability leaked past the momentum cutoff."""

    def __init__(self, leakage: float, cutoff: int):
        self.leakage = leakage
        self.cutoff = cutoff
        super().__init__(
            f"Probability {leakage:.3e} leaked beyond |n| = {cutoff}; "
            f"increase the momentum cutoff"
        )


class BesselRangeError(NumericalError):
    """Bessel argument outside the supported range."""


class DomainError(NumericalError, ValueError):
    """Inputs outside the domain of the requested route or observable."""


class ComparisonFailure(WalkError):
    """Two routes disagree by more than the configured tolerance."""

    exit_code = 4
