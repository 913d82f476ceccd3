"""Finite-difference model of H = -c^2 d^2/dx^2 + b^2 + V on a truncated line.

The line is cut to [-X, X] with homogeneous Dirichlet ends.  Bound states
below the continuum edge b^2 decay exponentially, so the truncation error
is exponentially small in X.  Second-order three-point stencils are used
for both derivatives; they keep the matrices exactly symmetric
(resp. antisymmetric), which the index computations rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .potentials import Potential, ProblemParams

__all__ = ["Grid", "SymTridiag", "SkewTridiag", "assemble_h", "assemble_d", "apply_derivative"]


@dataclass(frozen=True)
class Grid:
    """Uniform interior grid: x_j = -X + j h, j = 1..n, h = 2X/(n+1)."""

    half_width: float
    n_interior: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ConfigError(f"half_width must be positive, got {self.half_width}")
        if self.n_interior < 3:
            raise ConfigError(f"n_interior must be >= 3, got {self.n_interior}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_interior + 1)

    @property
    def nodes(self) -> np.ndarray:
        h = self.spacing
        return -self.half_width + h * np.arange(1, self.n_interior + 1)


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix (diagonal + one off-diagonal)."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        if e.shape != (d.size - 1,):
            raise ConfigError("off_diagonal must have length n - 1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ConfigError("matrix entries must be finite")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def size(self) -> int:
        return self.diagonal.size

    def matvec(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u)
        d = self.diagonal if u.ndim == 1 else self.diagonal[:, None]
        e = self.off_diagonal if u.ndim == 1 else self.off_diagonal[:, None]
        out = d * u
        out[:-1] += e * u[1:]
        out[1:] += e * u[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )

    def norm_estimate(self) -> float:
        """Infinity-norm bound, cheap scale for residual tolerances."""
        return float(np.max(np.abs(self.diagonal)) + 2.0 * np.max(np.abs(self.off_diagonal)))


@dataclass(frozen=True)
class SkewTridiag:
    """Real antisymmetric tridiagonal matrix; superdiagonal stored, subdiagonal is its negation."""

    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=float))

    def matvec(self, u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(u))
        out[:-1] += self.upper * u[1:]
        out[1:] -= self.upper * u[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.upper, 1) - np.diag(self.upper, -1)


def assemble_h(p: Potential, params: ProblemParams, g: Grid) -> SymTridiag:
    """Three-point stencil for -c^2 u'' + (b^2 + V) u with Dirichlet ends."""
    h = g.spacing
    x = g.nodes
    diag = 2.0 * params.c ** 2 / h ** 2 + params.b ** 2 + p.profile(x)
    off = np.full(g.n_interior - 1, -params.c ** 2 / h ** 2)
    return SymTridiag(diagonal=diag, off_diagonal=off)


def assemble_d(g: Grid) -> SkewTridiag:
    """Central difference for d/dx with zero ghost values at the ends."""
    return SkewTridiag(upper=np.full(g.n_interior - 1, 1.0 / (2.0 * g.spacing)))


def apply_derivative(g: Grid, u: np.ndarray) -> np.ndarray:
    """Central-difference derivative of an interior vector (zero ghosts)."""
    u = np.asarray(u)
    if u.shape != (g.n_interior,):
        raise ConfigError(f"expected vector of length {g.n_interior}, got shape {u.shape}")
    h = g.spacing
    out = np.zeros_like(u)
    out[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
    out[0] = u[1] / (2.0 * h)
    out[-1] = -u[-2] / (2.0 * h)
    return out
