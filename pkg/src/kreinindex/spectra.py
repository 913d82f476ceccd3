"""Eigensolver contracts shared by both discretizations.

Negative-eigenvalue counting and kernel detection both work relative to a
kernel window ``kernel_tol * reference_scale``: eigenvalues inside the
window are kernel candidates and are excluded from the negative count and
from pseudo-inverse sums, so the strict counting conventions of the index
formula survive discretization noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigenSolveError, KernelAmbiguityError, NotInRangeError
from .potentials import ProblemParams
from .schrodinger_fd import SymTridiag

__all__ = [
    "SpectrumResult",
    "KernelInfo",
    "ComplexSpectrum",
    "eig_hermitian",
    "count_negative",
    "detect_kernel",
    "apply_pseudo_inverse",
    "eig_general",
]


@dataclass(frozen=True)
class SpectrumResult:
    """Full Hermitian eigendecomposition with counting metadata.

    Eigenvalues ascending, eigenvector columns orthonormal in the same
    order; ``reference_scale`` is the essential-spectrum edge 2bc used to
    make tolerances dimensionless.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    reference_scale: float
    kernel_tol: float

    @property
    def kernel_window(self) -> float:
        return self.kernel_tol * self.reference_scale


@dataclass(frozen=True)
class KernelInfo:
    """At-most-one-dimensional kernel data.

    ``vector`` is the phase-aligned real representative (unit norm) when a
    kernel is present; ``index`` points at the corresponding eigenvector
    column of the parent decomposition, whose raw (possibly complex) phase
    is what range checks use.  ``imag_residual`` records how much imaginary
    part was discarded by the phase alignment.
    """

    dimension: int
    vector: np.ndarray | None = None
    raw_eigenvalue: float | None = None
    index: int | None = None
    imag_residual: float = 0.0


@dataclass(frozen=True)
class ComplexSpectrum:
    """General (non-Hermitian) eigendecomposition with per-pair residuals."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    matrix_norm: float


def eig_hermitian(m, params: ProblemParams, kernel_tol: float) -> SpectrumResult:
    """Full decomposition of a symmetric tridiagonal or Hermitian dense matrix."""
    if kernel_tol <= 0:
        raise EigenSolveError(f"kernel_tol must be positive, got {kernel_tol}")
    try:
        if isinstance(m, SymTridiag):
            vals, vecs = scipy.linalg.eigh_tridiagonal(m.diagonal, m.off_diagonal)
        else:
            a = np.asarray(m)
            defect = np.linalg.norm(a - a.conj().T) / max(np.linalg.norm(a), 1e-300)
            if defect > 1e-10:
                raise EigenSolveError(f"matrix is not Hermitian: relative defect {defect:.3e}")
            vals, vecs = scipy.linalg.eigh(a)
    except scipy.linalg.LinAlgError as exc:
        shape = (m.size,) if isinstance(m, SymTridiag) else np.shape(m)
        raise EigenSolveError(f"Hermitian eigensolver failed on matrix of shape {shape}: {exc}") from exc
    return SpectrumResult(
        eigenvalues=vals,
        eigenvectors=vecs,
        reference_scale=params.threshold,
        kernel_tol=kernel_tol,
    )


def count_negative(s: SpectrumResult) -> int:
    """Number of eigenvalues below the kernel window (kernel candidates excluded)."""
    return int(np.sum(s.eigenvalues < -s.kernel_window))


def detect_kernel(s: SpectrumResult) -> KernelInfo:
    """Locate the at-most-one-dimensional kernel inside the window.

    The eigenvector is phase-rotated so its largest-magnitude entry is
    real positive; the leftover imaginary part (tiny whenever the
    represented kernel function is real in the working basis) is dropped
    and its size recorded.
    """
    window = s.kernel_window
    idx = np.flatnonzero(np.abs(s.eigenvalues) <= window)
    if idx.size == 0:
        return KernelInfo(dimension=0)
    if idx.size > 1:
        raise KernelAmbiguityError(
            f"kernel ambiguity: {idx.size} eigenvalues inside the window "
            f"+-{window:.3e}: {s.eigenvalues[idx]}"
        )
    k = int(idx[0])
    v = s.eigenvectors[:, k]
    pivot = int(np.argmax(np.abs(v)))
    phase = v[pivot] / abs(v[pivot])
    aligned = v / phase
    imag_res = float(np.linalg.norm(np.imag(aligned)))
    vec = np.real(aligned)
    vec = vec / np.linalg.norm(vec)
    return KernelInfo(
        dimension=1,
        vector=vec,
        raw_eigenvalue=float(s.eigenvalues[k]),
        index=k,
        imag_residual=imag_res,
    )


def apply_pseudo_inverse(
    s: SpectrumResult, k: KernelInfo, w: np.ndarray, orth_tol: float = 1e-6
) -> np.ndarray:
    """Solve M u = w on the range, excluding kernel-window eigenvalues.

    Requires w to be orthogonal to the kernel when one is present; the
    output carries no component inside the kernel window.
    """
    w = np.asarray(w)
    if k.dimension == 1:
        raw = s.eigenvectors[:, k.index]
        overlap = abs(np.vdot(raw, w))
        if overlap > orth_tol * np.linalg.norm(w):
            raise NotInRangeError(overlap=float(overlap), tol=float(orth_tol * np.linalg.norm(w)))
    window = s.kernel_window
    mask = np.abs(s.eigenvalues) > window
    coeffs = s.eigenvectors[:, mask].conj().T @ w
    return s.eigenvectors[:, mask] @ (coeffs / s.eigenvalues[mask])


def eig_general(a: np.ndarray) -> ComplexSpectrum:
    """All eigenvalues and right eigenvectors of a dense complex matrix.

    Output sorted by (real, imaginary) part for reproducible reports;
    residuals ||A v - z v|| are computed per pair and must stay below
    1e-7 of the matrix norm.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise EigenSolveError(f"expected a square matrix, got shape {a.shape}")
    try:
        vals, vecs = scipy.linalg.eig(a)
    except scipy.linalg.LinAlgError as exc:
        raise EigenSolveError(f"general eigensolver failed on shape {a.shape}: {exc}") from exc
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    vecs = vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    residuals = np.linalg.norm(a @ vecs - vecs * vals, axis=0)
    norm = float(np.linalg.norm(a, np.inf))
    if residuals.max() > 1e-7 * norm:
        raise EigenSolveError(
            f"eigenpair residual {residuals.max():.3e} exceeds 1e-7 * ||A|| = {1e-7 * norm:.3e}"
        )
    return ComplexSpectrum(eigenvalues=vals, eigenvectors=vecs, residuals=residuals, matrix_norm=norm)
