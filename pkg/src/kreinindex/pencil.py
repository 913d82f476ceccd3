"""Classification of the pencil spectrum and the direct index count.

Eigenvalues of J L fall on the real axis (discretized continuum plus
possible finite-signature points), on the imaginary axis, or in quadrant
quartets; nonzero real eigenvalues additionally carry a Krein sign, the
sign of (L v, v) on their eigenspace.  The direct instability count adds
positive-imaginary multiplicity, twice the first-quadrant multiplicity
and twice the Krein-negative positive-real multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KernelAmbiguityError
from .index import IndexReport
from .spectra import ComplexSpectrum

__all__ = [
    "CLASS_NEAR_ZERO",
    "CLASS_REAL_POS",
    "CLASS_REAL_NEG",
    "CLASS_IMAG_POS",
    "CLASS_IMAG_NEG",
    "ClassifiedEigenvalue",
    "PencilCounts",
    "SymmetryReport",
    "kernel_exactify",
    "classify_spectrum",
    "check_spectral_symmetries",
    "kappa_ham_direct_vs_formula",
]

CLASS_NEAR_ZERO = "near_zero"
CLASS_REAL_POS = "real_positive"
CLASS_REAL_NEG = "real_negative"
CLASS_IMAG_POS = "imag_positive"
CLASS_IMAG_NEG = "imag_negative"
_QUADRANTS = {(1, 1): "quadrant_1", (-1, 1): "quadrant_2", (-1, -1): "quadrant_3", (1, -1): "quadrant_4"}


@dataclass(frozen=True)
class ClassifiedEigenvalue:
    z: complex
    label: str
    residual: float
    krein_negative: bool | None = None  # set only for nonzero real eigenvalues


@dataclass(frozen=True)
class PencilCounts:
    """Direct spectral counts of the discretized pencil."""

    kappa_c_plus: int
    kappa_imag_pos: int
    kappa_quadrant_1: int
    kappa_real_pos_neg_krein: int
    kappa_ham_direct: int


@dataclass(frozen=True)
class SymmetryReport:
    """Hausdorff mismatches of the spectrum under z -> z* and z -> -z*."""

    mismatch_conj: float
    mismatch_neg_conj: float
    tol: float
    n_excluded: int

    @property
    def passed(self) -> bool:
        return self.mismatch_conj <= self.tol and self.mismatch_neg_conj <= self.tol


def kernel_exactify(
    l: np.ndarray, kernel_tol: float, reference_scale: float
) -> tuple[np.ndarray, float | None]:
    """Remove the near-zero eigenvalue by a rank-one spectral correction.

    Returns the corrected Hermitian matrix and the eigenvalue that was
    zeroed out (None when no eigenvalue sits inside the window).  The
    correction makes the finite model's kernel exact so the integer index
    identity can be tested as an exact equality.
    """
    l = np.asarray(l)
    vals, vecs = np.linalg.eigh(l)
    window = kernel_tol * reference_scale
    idx = np.flatnonzero(np.abs(vals) <= window)
    if idx.size == 0:
        return l, None
    if idx.size > 1:
        raise KernelAmbiguityError(
            f"kernel ambiguity during exactification: eigenvalues {vals[idx]} inside +-{window:.3e}"
        )
    k = int(idx[0])
    v = vecs[:, k]
    return l - vals[k] * np.outer(v, v.conj()), float(vals[k])


def _cluster_real(values: np.ndarray, indices: np.ndarray, tol_class: float, scale: float):
    """Group nonzero real eigenvalues that coincide within the class tolerance."""
    order = np.argsort(values)
    clusters: list[list[int]] = []
    for pos in order:
        z = values[pos]
        if clusters and abs(z - values[clusters[-1][-1]]) <= tol_class * max(abs(z), scale):
            clusters[-1].append(pos)
        else:
            clusters.append([pos])
    return [[int(indices[p]) for p in cl] for cl in clusters]


def classify_spectrum(
    cs: ComplexSpectrum,
    l: np.ndarray,
    tol_class: float,
    zero_window: float,
    reference_scale: float,
) -> tuple[list[ClassifiedEigenvalue], PencilCounts, list[str]]:
    """Assign each pencil eigenvalue to axis/quadrant classes and count.

    Real/imaginary membership is decided relative to
    ``tol_class * max(|z|, reference_scale)``; |z| below
    ``zero_window * reference_scale`` is the zero group (kernel and its
    Jordan partners), which enters no count.  Ambiguous eigenvalues
    (satisfying both axis tests away from zero) and suspected defective
    real clusters are reported in the diagnostics list, never dropped.
    """
    l = np.asarray(l)
    zs = cs.eigenvalues
    n = zs.size
    labels = [""] * n
    diagnostics: list[str] = []

    near_zero = np.abs(zs) <= zero_window * reference_scale
    gauge = tol_class * np.maximum(np.abs(zs), reference_scale)
    on_real = np.abs(zs.imag) <= gauge
    on_imag = np.abs(zs.real) <= gauge

    for i in range(n):
        z = zs[i]
        if near_zero[i]:
            labels[i] = CLASS_NEAR_ZERO
        elif on_real[i] and on_imag[i]:
            diagnostics.append(
                f"classification ambiguity at z = {z:.6e}: within tolerance of both axes"
            )
            labels[i] = (
                (CLASS_REAL_POS if z.real > 0 else CLASS_REAL_NEG)
                if abs(z.real) >= abs(z.imag)
                else (CLASS_IMAG_POS if z.imag > 0 else CLASS_IMAG_NEG)
            )
        elif on_real[i]:
            labels[i] = CLASS_REAL_POS if z.real > 0 else CLASS_REAL_NEG
        elif on_imag[i]:
            labels[i] = CLASS_IMAG_POS if z.imag > 0 else CLASS_IMAG_NEG
        else:
            labels[i] = _QUADRANTS[(1 if z.real > 0 else -1, 1 if z.imag > 0 else -1)]

    # Krein signs of nonzero real eigenvalues, cluster by cluster.
    krein_neg: dict[int, bool] = {}
    kappa_real_pos_neg = 0
    real_idx = np.array(
        [i for i in range(n) if labels[i] in (CLASS_REAL_POS, CLASS_REAL_NEG)], dtype=int
    )
    if real_idx.size:
        for cluster in _cluster_real(zs[real_idx].real, real_idx, tol_class, reference_scale):
            vecs = cs.eigenvectors[:, cluster]
            rayleigh = [float(np.vdot(v, l @ v).real) for v in vecs.T]
            for i, r in zip(cluster, rayleigh):
                krein_neg[i] = r <= 0.0
            if len(cluster) > 1:
                q, _ = np.linalg.qr(vecs)
                gram = q.conj().T @ l @ q
                gram = (gram + gram.conj().T) / 2.0
                n_nonpos = int(np.sum(np.linalg.eigvalsh(gram) <= 0.0))
                overlaps = np.abs(vecs.conj().T @ vecs)
                np.fill_diagonal(overlaps, 0.0)
                if overlaps.max() > 0.99:
                    diagnostics.append(
                        f"defective real cluster suspected near z = {zs[cluster[0]].real:.6e} "
                        f"(size {len(cluster)}, max eigenvector overlap {overlaps.max():.3f})"
                    )
            else:
                n_nonpos = int(rayleigh[0] <= 0.0)
            if zs[cluster[0]].real > 0:
                kappa_real_pos_neg += n_nonpos

    classified = [
        ClassifiedEigenvalue(
            z=complex(zs[i]),
            label=labels[i],
            residual=float(cs.residuals[i]),
            krein_negative=krein_neg.get(i),
        )
        for i in range(n)
    ]

    kappa_imag_pos = sum(1 for lab in labels if lab == CLASS_IMAG_POS)
    kappa_q1 = sum(1 for lab in labels if lab == "quadrant_1")
    kappa_c_plus = sum(
        1
        for i in range(n)
        if labels[i] in (CLASS_IMAG_POS, "quadrant_1", "quadrant_2")
    )
    counts = PencilCounts(
        kappa_c_plus=kappa_c_plus,
        kappa_imag_pos=kappa_imag_pos,
        kappa_quadrant_1=kappa_q1,
        kappa_real_pos_neg_krein=kappa_real_pos_neg,
        kappa_ham_direct=kappa_imag_pos + 2 * kappa_q1 + 2 * kappa_real_pos_neg,
    )
    return classified, counts, diagnostics


def check_spectral_symmetries(
    cs: ComplexSpectrum, tol: float, exclude_radius: float = 0.0
) -> SymmetryReport:
    """Hausdorff mismatch of the eigenvalue multiset under z -> z* and z -> -z*.

    Eigenvalues inside ``exclude_radius`` of the origin may be excluded:
    zero is a fixed point of both symmetries, but a numerically split
    Jordan pair at zero scatters by the square root of the rounding error,
    which would mask genuine asymmetries elsewhere.
    """
    zs = cs.eigenvalues
    n_excluded = 0
    if exclude_radius > 0:
        keep = np.abs(zs) > exclude_radius
        n_excluded = int(np.sum(~keep))
        zs = zs[keep]
    if zs.size == 0:
        return SymmetryReport(0.0, 0.0, tol, n_excluded)

    def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
        d = np.abs(a[:, None] - b[None, :])
        return float(max(d.min(axis=1).max(), d.min(axis=0).max()))

    return SymmetryReport(
        mismatch_conj=hausdorff(zs, zs.conj()),
        mismatch_neg_conj=hausdorff(zs, -zs.conj()),
        tol=tol,
        n_excluded=n_excluded,
    )


def kappa_ham_direct_vs_formula(counts: PencilCounts, report: IndexReport) -> tuple[bool, dict]:
    """Exact integer comparison of the direct count against the formula."""
    record = {
        "kappa_ham_direct": counts.kappa_ham_direct,
        "kappa_ham_formula": report.kappa_ham,
        "kappa_imag_pos": counts.kappa_imag_pos,
        "kappa_quadrant_1": counts.kappa_quadrant_1,
        "kappa_real_pos_neg_krein": counts.kappa_real_pos_neg_krein,
        "kappa_minus": report.kappa_minus,
        "kappa_minus_d": report.kappa_minus_d,
        "verdict": report.verdict,
    }
    if report.kappa_ham is None:
        record["reason"] = "formula index undefined (degenerate d_v)"
        return False, record
    return counts.kappa_ham_direct == report.kappa_ham, record
