"""Exception types shared across the package."""


class UnsupportedShapeError(ValueError):
    """Operation is undefined for this pulse shape (e.g. rectangular derivative)."""


class SingularDetuningError(ValueError):
    """Mixing angle is ill-defined exactly on resonance (detuning = 0)."""


class DegenerateSamplingError(ValueError):
    """Sampling interval does not fit inside the pulse support."""


class ResourceLimitError(RuntimeError):
    """A configured step/sample/grid budget would be exceeded."""


class NoRootError(RuntimeError):
    """A bracketing solve failed; carries the endpoint residuals."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class InconclusiveError(RuntimeError):
    """A width or envelope measurement could not be concluded on the given
    grid (peak on the boundary, no half-maximum crossing, or no usable
    oscillation crests)."""
