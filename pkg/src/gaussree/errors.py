"""Exception types used across the package.

The CLI maps these onto exit codes: validation and domain problems exit
with 2, solver failures with 3, I/O trouble with 4.
"""


class GaussreeError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(GaussreeError, ValueError):
    """Structurally invalid input (shape, symmetry, JSON schema, ranges)."""


class DomainError(GaussreeError, ValueError):
    """Input is well formed but outside the mathematical domain of an
    operation (not positive definite, not bona fide, nu < 1, ...)."""


class NotFaithfulError(DomainError):
    """State has a symplectic eigenvalue at (or below) 1, so quantities
    that need full support (Gibbs matrix, log Z, relative entropy with the
    state in second position) are undefined."""

    def __init__(self, nu_min: float, message: str | None = None):
        self.nu_min = float(nu_min)
        if message is None:
            message = (
                "state not faithful: smallest symplectic eigenvalue "
                f"{self.nu_min:.12g} is not above 1"
            )
        super().__init__(message)


class SolverError(GaussreeError, RuntimeError):
    """Numerical optimization did not reach its target accuracy."""
