"""Shared fixtures: the standard problem suite at reference resolutions.

The expensive eigendecompositions are session-scoped; most tests reuse
them instead of re-solving.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pytest

import kreinindex as ki

# The reference suite: sech^2 wells with known spectra {b^2 - c^2 (mu - k)^2},
# the shifted well (kernel destroyed, kappa_- = 2) and the free problem.
PT2 = ki.PoschlTeller(nu=2, scale=-6.0)
PT3 = ki.PoschlTeller(nu=3, scale=-12.0)
# constant -0.5 across the computational window, zero far outside
SHIFT = ki.Sum(parts=(PT2, ki.SquareWell(depth=-0.5, half_width=40.0)))
ZERO = ki.ZeroPotential()

PARAMS = ki.ProblemParams(b=1.0, c=1.0)


@dataclass(frozen=True)
class FDCase:
    potential: ki.Potential
    params: ki.ProblemParams
    grid: ki.Grid
    matrix: ki.SymTridiag
    spectrum: ki.SpectrumResult
    kernel: ki.KernelInfo


@dataclass(frozen=True)
class FourierCase:
    potential: ki.Potential
    params: ki.ProblemParams
    fgrid: ki.FourierGrid
    lmat: np.ndarray
    spectrum: ki.SpectrumResult
    j: ki.SignatureDiag
    kernel: ki.KernelInfo


def make_fd(pot, params=PARAMS, half_width=20.0, n=2000, kernel_tol=1e-4) -> FDCase:
    grid = ki.Grid(half_width, n)
    mat = ki.assemble_h(pot, params, grid)
    spec = ki.eig_hermitian(mat, params, kernel_tol)
    kern = ki.detect_kernel(spec)
    return FDCase(pot, params, grid, mat, spec, kern)


def make_fourier(pot, params=PARAMS, half_width=20.0, n_modes=512, kernel_tol=1e-4) -> FourierCase:
    fgrid = ki.FourierGrid(half_width, n_modes)
    lmat = ki.assemble_l(pot, params, fgrid)
    spec = ki.eig_hermitian(lmat, params, kernel_tol)
    kern = ki.detect_kernel(spec)
    return FourierCase(pot, params, fgrid, lmat, spec, ki.assemble_j(fgrid), kern)


@pytest.fixture(scope="session")
def fd_pt2() -> FDCase:
    return make_fd(PT2)


@pytest.fixture(scope="session")
def fd_pt2_fine() -> FDCase:
    return make_fd(PT2, half_width=25.0, n=4000)


@pytest.fixture(scope="session")
def fd_pt3() -> FDCase:
    # the near-zero eigenvalue needs h^2 below the kernel window
    return make_fd(PT3, n=4000)


@pytest.fixture(scope="session")
def fd_shift() -> FDCase:
    return make_fd(SHIFT)


@pytest.fixture(scope="session")
def fd_zero() -> FDCase:
    return make_fd(ZERO)


@pytest.fixture(scope="session")
def fourier_pt2() -> FourierCase:
    return make_fourier(PT2)


@pytest.fixture(scope="session")
def fourier_pt3() -> FourierCase:
    return make_fourier(PT3)


@pytest.fixture(scope="session")
def fourier_shift() -> FourierCase:
    return make_fourier(SHIFT)


@pytest.fixture(scope="session")
def fourier_zero() -> FourierCase:
    return make_fourier(ZERO)
