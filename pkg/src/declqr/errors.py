"""Exception types shared across the toolkit."""


class InputError(ValueError):
    """Bad argument: wrong dimensions, non-finite entries, or a violated precondition."""


class SolverError(RuntimeError):
    """A numerical solve failed or a required certificate could not be established."""


class ResonantSpectrumError(SolverError):
    """The Lyapunov operator is singular (a pair of eigenvalues of A sums to zero)."""


class UnstabilizableError(SolverError):
    """Stabilizing-gain construction failed: unstabilizable or ill-conditioned pair."""


class NonconvergentError(SolverError):
    """The Riccati iteration stopped without meeting its residual tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
