"""Exception types shared across the package."""


class QuadflowError(Exception):
    """Base class for all package errors."""


class PositivityError(QuadflowError):
    """A flow fails the strict positivity certificate."""

    def __init__(self, message: str, margin: float | None = None):
        super().__init__(message)
        self.margin = margin


class BoundarySpectrumError(QuadflowError):
    """Eigenvalues too close to the unit circle to split into pairs."""


class CompositionClassError(QuadflowError):
    """A composed evolution leaves the strictly positive class."""


class DegenerateKernelError(QuadflowError):
    """Gaussian kernel whose cross block is numerically singular."""


class SymbolConvergenceError(QuadflowError):
    """A Gaussian integral in the symbol calculus diverges."""


class GridError(QuadflowError):
    """Grid construction or tail certification failed."""


class ConvergenceError(QuadflowError):
    """An iterative numerical routine failed to converge."""
