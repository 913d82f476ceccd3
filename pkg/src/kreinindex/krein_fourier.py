"""Fourier collocation model of the half-derivative operators on [-X, X].

The Hilbert space is the homogeneous half-derivative space: coefficient
vectors are stored in the rescaled basis ``u~ = |lambda|^{1/2} u^`` in
which its inner product is the standard one, every |D|^a is diagonal and
the signature (sign of the wavenumber) stays diagonal.

Wavenumbers are the *half-integer* multiples lambda_k = pi (k + 1/2) / X,
i.e. the antiperiodic Fourier basis on a window of length 2X.  That basis
is complete in L^2 of the window and contains no constants, so the zero
wavenumber (where |D|^{-1} is singular) never appears and localized
functions with nonzero mean are still represented with spectral accuracy.
A periodic integer grid with the zero mode deleted loses exactly that
mean component and visibly distorts kernels of even symmetry; the
antiperiodic grid avoids the problem at no extra cost.

The potential enters through its convolution matrix, built from the FFT
of the node samples (periodization of V); wavenumber differences are
integer multiples of pi/X, so a single FFT serves the whole matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .potentials import Potential, ProblemParams

__all__ = [
    "FourierGrid",
    "SignatureDiag",
    "free_symbol",
    "assemble_l",
    "assemble_j",
    "assemble_pencil",
    "embed_l2_to_krein",
    "node_samples_from_krein",
    "l2_norm_from_krein",
]


@dataclass(frozen=True)
class FourierGrid:
    """Collocation grid with half-integer wavenumbers (no zero mode)."""

    half_width: float
    n_modes: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ConfigError(f"half_width must be positive, got {self.half_width}")
        if self.n_modes < 8 or self.n_modes % 2:
            raise ConfigError(f"n_modes must be even and >= 8, got {self.n_modes}")

    @property
    def nodes(self) -> np.ndarray:
        """Collocation nodes x_j = -X + 2X j / n, j = 0..n-1."""
        n = self.n_modes
        return -self.half_width + 2.0 * self.half_width * np.arange(n) / n

    @property
    def mode_numbers(self) -> np.ndarray:
        """Half-integers k with lambda_k = pi k / X, ascending."""
        half = np.arange(self.n_modes // 2) + 0.5
        return np.concatenate([-half[::-1], half])

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.pi * self.mode_numbers / self.half_width


@dataclass(frozen=True)
class SignatureDiag:
    """Diagonal +-1 signature: sign of the wavenumber."""

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=float)
        if not np.all(np.abs(s) == 1.0):
            raise ConfigError("signature entries must be +-1")
        object.__setattr__(self, "signs", s)

    @property
    def size(self) -> int:
        return self.signs.size


def free_symbol(lam: float, params: ProblemParams) -> float:
    """Symbol c^2 |lambda| + b^2 / |lambda| of the free operator."""
    if lam == 0:
        raise ConfigError("the free symbol is singular at lambda = 0")
    a = abs(lam)
    return params.c ** 2 * a + params.b ** 2 / a


def _potential_coefficients(p: Potential, fg: FourierGrid) -> np.ndarray:
    """Fourier coefficients of the periodized potential at integer mode offsets.

    Entry ``m`` (offset index ``m + n - 1``) holds the coefficient at
    wavenumber pi m / X for |m| <= n/2 - 1; offsets beyond the sampling
    band are zero, which is exact for band-limited V and spectrally
    accurate for the smooth built-ins.
    """
    n = fg.n_modes
    f = np.fft.fft(p.profile(fg.nodes)) / n
    out = np.zeros(2 * n - 1, dtype=complex)
    ms = np.arange(-(n // 2 - 1), n // 2)
    out[ms + n - 1] = ((-1.0) ** np.abs(ms)) * f[ms % n]
    return out


def assemble_l(p: Potential, params: ProblemParams, fg: FourierGrid) -> np.ndarray:
    """Hermitian matrix of the perturbed operator in the rescaled basis.

    ``L = diag(free_symbol(lambda_k)) + S`` with
    ``S_kl = |lambda_k|^{-1/2} Vhat(lambda_k - lambda_l) |lambda_l|^{-1/2}``;
    S is Hermitian because V is real.
    """
    lam = fg.wavenumbers
    vhat = _potential_coefficients(p, fg)
    ks = fg.mode_numbers
    diffs = np.rint(ks[:, None] - ks[None, :]).astype(int)
    smat = vhat[diffs + fg.n_modes - 1]
    w = 1.0 / np.sqrt(np.abs(lam))
    free = params.c ** 2 * np.abs(lam) + params.b ** 2 / np.abs(lam)
    return np.diag(free).astype(complex) + w[:, None] * smat * w[None, :]


def assemble_j(fg: FourierGrid) -> SignatureDiag:
    """Signature diag(sgn lambda_k); an involution commuting with the rescaling."""
    return SignatureDiag(signs=np.sign(fg.wavenumbers))


def assemble_pencil(l: np.ndarray, j: SignatureDiag) -> np.ndarray:
    """Non-Hermitian pencil matrix J L, self-adjoint in the indefinite product (J., .)."""
    l = np.asarray(l)
    if l.shape != (j.size, j.size):
        raise ConfigError(f"size mismatch: L is {l.shape}, signature has {j.size} entries")
    return j.signs[:, None] * l


def embed_l2_to_krein(fg: FourierGrid, u: np.ndarray) -> np.ndarray:
    """Map node samples to rescaled coefficients ``sqrt(2X) |lambda|^{1/2} u^``.

    The standard norm of the output approximates the half-derivative norm
    of u (exactly, for signals band-limited to the retained modes).
    """
    u = np.asarray(u)
    n = fg.n_modes
    if u.shape != (n,):
        raise ConfigError(f"expected {n} node samples, got shape {u.shape}")
    jdx = np.arange(n)
    spectrum = np.fft.fft(u * np.exp(-1j * np.pi * jdx / n)) / n
    # FFT bin m holds half-integer mode k = m + 1/2 - n*(m >= n/2)
    ks = np.where(jdx < n // 2, jdx + 0.5, jdx + 0.5 - n)
    coeffs = np.exp(1j * np.pi * ks) * spectrum
    order = np.argsort(ks)
    lam = fg.wavenumbers
    return np.sqrt(2.0 * fg.half_width) * np.sqrt(np.abs(lam)) * coeffs[order]


def node_samples_from_krein(fg: FourierGrid, coeffs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`embed_l2_to_krein` (node samples of the represented function)."""
    n = fg.n_modes
    lam = fg.wavenumbers
    c = np.asarray(coeffs) / (np.sqrt(2.0 * fg.half_width) * np.sqrt(np.abs(lam)))
    ks = fg.mode_numbers
    jdx = np.arange(n)
    bins = np.where(ks > 0, np.rint(ks - 0.5), np.rint(ks - 0.5 + n)).astype(int)
    spectrum = np.zeros(n, dtype=complex)
    spectrum[bins] = c * np.exp(-1j * np.pi * ks)
    return np.fft.ifft(spectrum) * n * np.exp(1j * np.pi * jdx / n)


def l2_norm_from_krein(fg: FourierGrid, coeffs: np.ndarray) -> float:
    """L^2 norm of the function represented by rescaled coefficients."""
    lam = fg.wavenumbers
    return float(np.sqrt(np.sum(np.abs(coeffs) ** 2 / np.abs(lam))))
