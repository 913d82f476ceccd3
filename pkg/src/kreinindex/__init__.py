"""Spectral stability of -c^2 y'' + b^2 y + V y = -i z y' on the line.

The instability index is computed two independent ways -- from the
negative count and constraint scalar of the Schrodinger operator
H = -c^2 d^2/dx^2 + b^2 + V, and from direct diagonalization of the
indefinite pencil J L in the half-derivative space -- and the two are
cross-verified as exact integers.
"""

from .bounds import BoundsReport, bargmann_bound, birman_schwinger_bound
from .errors import (
    ConfigError,
    EigenSolveError,
    KernelAmbiguityError,
    KreinIndexError,
    MissingKernelError,
    NotInRangeError,
    ValidationError,
)
from .index import (
    VERDICT_DEGENERATE,
    VERDICT_NO_NEGATIVE,
    VERDICT_STABLE,
    VERDICT_UNSTABLE,
    IndexReport,
    JordanChain,
    compute_d_krein,
    compute_dv,
    jordan_chain_at_zero,
    kappa_ham_formula,
)
from .krein_fourier import (
    FourierGrid,
    SignatureDiag,
    assemble_j,
    assemble_l,
    assemble_pencil,
    embed_l2_to_krein,
    free_symbol,
    l2_norm_from_krein,
    node_samples_from_krein,
)
from .pencil import (
    ClassifiedEigenvalue,
    PencilCounts,
    SymmetryReport,
    check_spectral_symmetries,
    classify_spectrum,
    kappa_ham_direct_vs_formula,
    kernel_exactify,
)
from .potentials import (
    GaussianWell,
    PoschlTeller,
    Potential,
    ProblemParams,
    Sampled,
    Scaled,
    SquareWell,
    Sum,
    ZeroPotential,
    decay_defect,
    evaluate,
    load_sampled_csv,
    m_v,
    negative_part_moments,
    window_integral,
)
from .report import RunConfig, RunReport, analyze, emit, pencil_run, sweep, validate
from .schrodinger_fd import Grid, SkewTridiag, SymTridiag, apply_derivative, assemble_d, assemble_h
from .spectra import (
    ComplexSpectrum,
    KernelInfo,
    SpectrumResult,
    apply_pseudo_inverse,
    count_negative,
    detect_kernel,
    eig_general,
    eig_hermitian,
)

__version__ = "0.1.0"
