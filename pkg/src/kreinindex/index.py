"""The scalar constraint D_V, the index formula and Jordan chains at zero.

Conventions: kernel vectors are normalized to unit L^2 norm of the
function they represent (grid vectors carry the quadrature weight h, the
half-derivative coefficient vectors carry the wavenumber weights), so the
two routes to the constraint scalar are directly comparable numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, MissingKernelError
from .krein_fourier import SignatureDiag
from .schrodinger_fd import Grid, apply_derivative
from .spectra import KernelInfo, SpectrumResult, apply_pseudo_inverse

__all__ = [
    "VERDICT_STABLE",
    "VERDICT_UNSTABLE",
    "VERDICT_DEGENERATE",
    "VERDICT_NO_NEGATIVE",
    "IndexReport",
    "JordanChain",
    "compute_dv",
    "compute_d_krein",
    "kappa_ham_formula",
    "jordan_chain_at_zero",
]

VERDICT_STABLE = "Stable"
VERDICT_UNSTABLE = "Unstable"
VERDICT_DEGENERATE = "DegenerateDV"
VERDICT_NO_NEGATIVE = "NoNegativeSpectrum"


@dataclass(frozen=True)
class IndexReport:
    """Outcome of the counting formula.

    ``kappa_minus_d`` is present only when a kernel exists and d_v is
    nondegenerate; ``kappa_ham = kappa_minus - kappa_minus_d`` whenever
    both are defined.
    """

    kappa_minus: int
    kernel_dim: int
    d_v: float | None
    kappa_minus_d: int | None
    kappa_ham: int | None
    verdict: str
    notes: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class JordanChain:
    """Vectors psi_0 .. psi_{m-1} with H psi_k = psi_{k-1}' for k >= 1."""

    vectors: tuple[np.ndarray, ...]

    @property
    def length(self) -> int:
        return len(self.vectors)


def compute_dv(h_spectrum: SpectrumResult, k: KernelInfo, g: Grid, orth_tol: float = 1e-6) -> float:
    """Constraint scalar (H^{-1} psi_0', psi_0') in the L^2 pairing.

    psi_0 is taken with unit L^2 norm; its derivative is automatically
    orthogonal to psi_0 (the central difference is exactly antisymmetric),
    which is asserted before inverting on the range.
    """
    if k.dimension != 1:
        raise MissingKernelError("compute_dv requires a one-dimensional kernel")
    if k.imag_residual > 1e-8:
        raise ConfigError(
            f"kernel vector not real after phase alignment (residual {k.imag_residual:.3e})"
        )
    h = g.spacing
    psi = k.vector / np.sqrt(h)  # unit L^2 norm as a function
    w = apply_derivative(g, psi)
    overlap = abs(h * np.dot(w, psi))
    if overlap > orth_tol:
        raise ConfigError(
            f"derivative not orthogonal to kernel: |<psi0', psi0>| = {overlap:.3e}"
        )
    sol = apply_pseudo_inverse(h_spectrum, k, w, orth_tol=orth_tol)
    return float(np.real(h * np.dot(sol, w)))


def compute_d_krein(
    l_spectrum: SpectrumResult,
    k: KernelInfo,
    j: SignatureDiag,
    wavenumbers: np.ndarray,
    orth_tol: float = 1e-6,
) -> float:
    """Constraint scalar (L^{-1} J psi_0, J psi_0) in the half-derivative pairing.

    Needs the wavenumbers to renormalize the kernel coefficient vector to
    unit L^2 norm of the represented function; with that normalization the
    value matches :func:`compute_dv` on the same problem.
    """
    if k.dimension != 1:
        raise MissingKernelError("compute_d_krein requires a one-dimensional kernel")
    lam = np.abs(np.asarray(wavenumbers, dtype=float))
    psi = l_spectrum.eigenvectors[:, k.index]
    psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2 / lam))
    jpsi = j.signs * psi
    # J psi_0 _|_ psi_0 holds automatically for real kernel functions; the
    # range precondition below rejects anything else.
    sol = apply_pseudo_inverse(l_spectrum, k, jpsi, orth_tol=orth_tol)
    value = np.vdot(jpsi, sol)
    return float(np.real(value))


def kappa_ham_formula(
    kappa_minus: int,
    kernel_dim: int,
    d_v: float | None,
    degeneracy_tol: float,
) -> IndexReport:
    """Index count and stability verdict from (kappa_minus, kernel, d_v).

    No kernel: the count equals kappa_minus.  With a kernel, the sign of
    d_v decides whether one negative direction is absorbed; |d_v| inside
    the degeneracy tolerance leaves the count undefined and the verdict
    degenerate (a Jordan chain of length >= 3 is expected instead).
    """
    if kernel_dim not in (0, 1):
        raise ConfigError(f"kernel_dim must be 0 or 1, got {kernel_dim}")
    if (d_v is None) != (kernel_dim == 0):
        raise ConfigError("d_v must be supplied exactly when kernel_dim == 1")
    if degeneracy_tol <= 0:
        raise ConfigError("degeneracy_tol must be positive")

    notes: list[str] = []
    kappa_minus_d: int | None = None
    kappa_ham: int | None = None

    if kernel_dim == 0:
        kappa_ham = kappa_minus
    elif abs(d_v) <= degeneracy_tol:
        notes.append(
            f"|d_v| = {abs(d_v):.3e} inside degeneracy tolerance {degeneracy_tol:.3e}; "
            "index undefined, Jordan chain of length >= 3 expected at zero"
        )
    else:
        kappa_minus_d = 1 if d_v < 0 else 0
        kappa_ham = kappa_minus - kappa_minus_d
        if kappa_ham < 0:
            notes.append(
                "formula gave a negative index (kappa_minus = 0 with d_v < 0); "
                "clamped to 0 -- check tolerances"
            )
            kappa_ham = 0
        if (kappa_minus % 2 == 1 and d_v > 0) or (kappa_minus % 2 == 0 and d_v < 0):
            notes.append("at least one purely imaginary eigenvalue expected on i R_{>0}")

    if kappa_ham is None:
        verdict = VERDICT_DEGENERATE
    elif kappa_minus == 0:
        verdict = VERDICT_NO_NEGATIVE
    elif kappa_ham == 0:
        verdict = VERDICT_STABLE
    else:
        verdict = VERDICT_UNSTABLE

    return IndexReport(
        kappa_minus=int(kappa_minus),
        kernel_dim=int(kernel_dim),
        d_v=d_v,
        kappa_minus_d=kappa_minus_d,
        kappa_ham=kappa_ham,
        verdict=verdict,
        notes=tuple(notes),
    )


def jordan_chain_at_zero(
    h_spectrum: SpectrumResult,
    k: KernelInfo,
    g: Grid,
    max_len: int = 6,
    orth_tol: float = 1e-6,
) -> JordanChain:
    """Iterate psi_{k+1} = H^{-1} psi_k' while psi_k' stays in the range.

    The first step always succeeds (psi_0' is orthogonal to psi_0), so the
    chain has length >= 2; it reaches length >= 3 exactly when the
    constraint scalar vanishes to tolerance.
    """
    if k.dimension != 1:
        raise MissingKernelError("jordan_chain_at_zero requires a one-dimensional kernel")
    if max_len < 1:
        raise ConfigError("max_len must be >= 1")
    psi0 = k.vector / np.sqrt(g.spacing)
    chain = [psi0]
    norm0 = np.linalg.norm(psi0)
    while len(chain) < max_len:
        w = apply_derivative(g, chain[-1])
        overlap = abs(np.dot(w, psi0))
        if overlap > orth_tol * np.linalg.norm(w) * norm0:
            break
        chain.append(apply_pseudo_inverse(h_spectrum, k, w, orth_tol=orth_tol))
    return JordanChain(vectors=tuple(chain))
