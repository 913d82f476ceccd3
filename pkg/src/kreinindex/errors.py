"""Exception types shared across the package."""


class KreinIndexError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(KreinIndexError):
    """Invalid run configuration or potential specification."""


class EigenSolveError(KreinIndexError):
    """The underlying eigensolver failed to converge or returned garbage."""


class KernelAmbiguityError(KreinIndexError):
    """Two or more eigenvalues inside the kernel window.

    The continuum kernel is at most one-dimensional, so this signals a
    discretization artifact (window too wide or resolution too low).
    """


class MissingKernelError(KreinIndexError):
    """An operation requiring a one-dimensional kernel found none."""


class NotInRangeError(KreinIndexError):
    """Pseudo-inverse applied to a vector with a kernel component."""

    def __init__(self, overlap: float, tol: float):
        self.overlap = overlap
        self.tol = tol
        super().__init__(
            f"vector is not in the operator range: kernel overlap "
            f"{overlap:.3e} exceeds tolerance {tol:.3e}"
        )


class ValidationError(KreinIndexError):
    """A consistency check of the validation workflow failed."""
