"""A priori bounds on the number of eigenvalues below the continuum.

Two classical counting estimates, evaluated by quadrature on the working
window: a Bargmann-type weighted moment of the part of V dipping below
-b^2, and a Birman-Schwinger-type bound (1/2bc) * int |V_-|.  Both are
checked against the observed counts; the integrals run over [-X, X] only,
so for decaying potentials they are lower bounds on the line integrals
with exponentially small defect.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .potentials import Potential, ProblemParams, negative_part_moments

__all__ = ["BoundsReport", "bargmann_bound", "birman_schwinger_bound"]


@dataclass(frozen=True)
class BoundsReport:
    """Bound values next to the observed counts they must dominate."""

    bargmann: float | None
    birman_schwinger: float
    kappa_minus_observed: int
    dim_nonpositive_observed: int

    @property
    def satisfied(self) -> bool:
        ok = self.dim_nonpositive_observed <= self.birman_schwinger
        if self.bargmann is not None:
            ok = ok and self.kappa_minus_observed <= self.bargmann
        return ok


def bargmann_bound(
    p: Potential, params: ProblemParams, half_width: float, quad_points: int = 4096
) -> float | None:
    """``1 + (1/c^2) int |x| |min(V + b^2, 0)| dx``, or None when V >= -b^2.

    The None case certifies kappa_minus = 0 directly (the quadratic form
    is nonnegative), so no bound value is needed.
    """
    x = np.linspace(-half_width, half_width, max(quad_points, 2) + 1)
    if np.all(p.profile(x) + params.b ** 2 >= 0.0):
        return None
    moment, _ = negative_part_moments(p, params, half_width, quad_points)
    return 1.0 + moment / params.c ** 2


def birman_schwinger_bound(
    p: Potential, params: ProblemParams, half_width: float, quad_points: int = 4096
) -> float:
    """``(1/2bc) int |V_-| dx`` with V_- the negative part of V.

    Dominates the dimension of the nonpositive spectral subspace, i.e.
    the negative count plus the kernel dimension.
    """
    _, mass = negative_part_moments(p, params, half_width, quad_points)
    return mass / params.threshold
