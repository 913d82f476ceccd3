"""Run configurations, the four workflows, and deterministic reports.

A report serializes byte-identically for identical configurations: dicts
are built in a fixed order, floats are written with 17 significant
digits, and wall-clock timings stay out of the canonical JSON (they are
returned separately for console display).
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from . import krein_fourier as kf
from . import potentials as pots
from .bounds import BoundsReport, bargmann_bound, birman_schwinger_bound
from .errors import ConfigError
from .index import compute_d_krein, compute_dv, jordan_chain_at_zero, kappa_ham_formula
from .pencil import (
    CLASS_NEAR_ZERO,
    check_spectral_symmetries,
    classify_spectrum,
    kappa_ham_direct_vs_formula,
    kernel_exactify,
)
from .potentials import Potential, ProblemParams, Scaled
from .schrodinger_fd import Grid, apply_derivative, assemble_h
from .spectra import count_negative, detect_kernel, eig_general, eig_hermitian

__all__ = ["RunConfig", "RunReport", "analyze", "pencil_run", "validate", "sweep", "emit"]

FAULT_NAMES = ("j_sign_flip", "l_nonhermitian", "dv_negate", "kappa_shift")

DV_CROSS_RTOL = 1e-3
SYMMETRY_TOL_FACTOR = 1e-7
GAP_EPS_FACTOR = 1e-6


@dataclass(frozen=True)
class RunConfig:
    """Everything a workflow needs, with the defaults of the test suite."""

    potential: Potential
    params: ProblemParams = ProblemParams()
    half_width: float = 20.0
    n_fd: int = 2000
    n_fourier: int = 512
    kernel_tol: float = 1e-4
    degeneracy_tol: float = 0.0  # 0 -> scale-aware automatic value
    tol_class: float = 1e-8
    mode: str = "analyze"
    out: str | None = None
    emit_csv: bool = False
    s_min: float = 1.0
    s_max: float = 9.0
    branch: int = 1
    bisect_tol: float = 1e-8
    coarse_points: int = 33
    inject_fault: str | None = None

    def __post_init__(self):
        if self.s_min >= self.s_max and self.mode == "sweep":
            raise ConfigError(f"sweep needs s_min < s_max, got [{self.s_min}, {self.s_max}]")
        if self.inject_fault is not None and self.inject_fault not in FAULT_NAMES:
            raise ConfigError(f"unknown fault {self.inject_fault!r}; known: {FAULT_NAMES}")


@dataclass
class RunReport:
    """Sections of a finished run; ``timing`` never enters the JSON."""

    config: dict
    potential_checks: dict
    fd: dict
    fourier: dict
    index: dict
    bounds: dict
    pencil: dict | None = None
    validation: dict | None = None
    crossings: list | None = None
    timing: dict = field(default_factory=dict)
    fd_spectrum: np.ndarray | None = None
    fourier_spectrum: np.ndarray | None = None
    pencil_spectrum: list | None = None

    def to_json_dict(self) -> dict:
        out = {
            "config": self.config,
            "potential_checks": self.potential_checks,
            "fd": self.fd,
            "fourier": self.fourier,
            "index": self.index,
            "bounds": self.bounds,
        }
        if self.pencil is not None:
            out["pencil"] = self.pencil
        if self.validation is not None:
            out["validation"] = self.validation
        if self.crossings is not None:
            out["crossings"] = self.crossings
        return out


def describe_potential(p: Potential) -> dict:
    """JSON-ready recursive description of a potential."""
    if isinstance(p, pots.PoschlTeller):
        return {"kind": "poschl_teller", "nu": p.nu, "scale": p.scale}
    if isinstance(p, pots.GaussianWell):
        return {"kind": "gaussian_well", "depth": p.depth, "width": p.width, "center": p.center}
    if isinstance(p, pots.SquareWell):
        return {"kind": "square_well", "depth": p.depth, "half_width": p.half_width}
    if isinstance(p, pots.Sampled):
        return {"kind": "sampled", "n_nodes": int(p.xs.size), "x_min": float(p.xs[0]), "x_max": float(p.xs[-1])}
    if isinstance(p, pots.Sum):
        return {"kind": "sum", "parts": [describe_potential(q) for q in p.parts]}
    if isinstance(p, pots.Scaled):
        return {"kind": "scaled", "s": p.s, "base": describe_potential(p.base)}
    if isinstance(p, pots.ZeroPotential):
        return {"kind": "zero"}
    return {"kind": type(p).__name__}


def _config_echo(cfg: RunConfig) -> dict:
    return {
        "mode": cfg.mode,
        "potential": describe_potential(cfg.potential),
        "b": cfg.params.b,
        "c": cfg.params.c,
        "half_width": cfg.half_width,
        "n_fd": cfg.n_fd,
        "n_fourier": cfg.n_fourier,
        "kernel_tol": cfg.kernel_tol,
        "degeneracy_tol": cfg.degeneracy_tol,
        "tol_class": cfg.tol_class,
        "inject_fault": cfg.inject_fault,
    }


def _auto_degeneracy_tol(cfg: RunConfig, g: Grid, kern) -> float:
    """Scale 1e-6 * ||psi_0'||^2 / (2bc); falls back to 1e-9 without a kernel."""
    if cfg.degeneracy_tol > 0:
        return cfg.degeneracy_tol
    if kern.dimension != 1:
        return 1e-9
    w = apply_derivative(g, kern.vector / math.sqrt(g.spacing))
    return 1e-6 * g.spacing * float(w @ w) / cfg.params.threshold


def _kernel_dict(kern) -> dict:
    d = {"dimension": kern.dimension}
    if kern.dimension == 1:
        d["raw_eigenvalue"] = float(kern.raw_eigenvalue)
    return d


class _Core:
    """Shared state of one analysis: both discretizations plus the formula."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        pot, params = cfg.potential, cfg.params

        self.grid = Grid(cfg.half_width, cfg.n_fd)
        self.h_spec = eig_hermitian(assemble_h(pot, params, self.grid), params, cfg.kernel_tol)
        self.kappa_fd = count_negative(self.h_spec)
        self.kern_fd = detect_kernel(self.h_spec)
        self.d_v = (
            compute_dv(self.h_spec, self.kern_fd, self.grid)
            if self.kern_fd.dimension == 1
            else None
        )
        self.degeneracy_tol = _auto_degeneracy_tol(cfg, self.grid, self.kern_fd)
        self.formula = kappa_ham_formula(
            self.kappa_fd, self.kern_fd.dimension, self.d_v, self.degeneracy_tol
        )

        self.fgrid = kf.FourierGrid(cfg.half_width, cfg.n_fourier)
        self.l_mat = kf.assemble_l(pot, params, self.fgrid)
        self.j = kf.assemble_j(self.fgrid)
        self.l_spec = eig_hermitian(self.l_mat, params, cfg.kernel_tol)
        self.kappa_fourier = count_negative(self.l_spec)
        self.kern_fourier = detect_kernel(self.l_spec)
        self.d_krein = (
            compute_d_krein(self.l_spec, self.kern_fourier, self.j, self.fgrid.wavenumbers)
            if self.kern_fourier.dimension == 1
            else None
        )

        self.bargmann = bargmann_bound(pot, params, cfg.half_width)
        self.birman_schwinger = birman_schwinger_bound(pot, params, cfg.half_width)
        self.bounds = BoundsReport(
            bargmann=self.bargmann,
            birman_schwinger=self.birman_schwinger,
            kappa_minus_observed=self.kappa_fd,
            dim_nonpositive_observed=self.kappa_fd + self.kern_fd.dimension,
        )

    def jordan_chain_length(self) -> int | None:
        if self.kern_fd.dimension != 1:
            return None
        return jordan_chain_at_zero(self.h_spec, self.kern_fd, self.grid).length

    def base_report(self) -> RunReport:
        cfg = self.cfg
        pot = cfg.potential
        threshold = cfg.params.threshold
        tail_lo = max(1.0, cfg.half_width / 2.0)
        checks = {
            "m_v": float(pots.m_v(pot, cfg.half_width)),
            "decay_defect": float(pots.decay_defect(pot, tail_lo, cfg.half_width)),
            "decay_window": [float(tail_lo), float(cfg.half_width)],
        }
        fd_below = self.h_spec.eigenvalues[self.h_spec.eigenvalues < threshold]
        fourier_below = self.l_spec.eigenvalues[self.l_spec.eigenvalues < threshold]
        idx = {
            "kappa_minus": self.formula.kappa_minus,
            "kernel_dim": self.formula.kernel_dim,
            "d_v": self.d_v,
            "d_krein": self.d_krein,
            "kappa_minus_d": self.formula.kappa_minus_d,
            "kappa_ham": self.formula.kappa_ham,
            "verdict": self.formula.verdict,
            "degeneracy_tol": self.degeneracy_tol,
            "notes": list(self.formula.notes),
        }
        if self.kern_fd.dimension == 1:
            idx["jordan_chain_length"] = self.jordan_chain_length()
        bounds = {
            "bargmann": self.bargmann,
            "birman_schwinger": self.birman_schwinger,
            "kappa_minus_observed": self.kappa_fd,
            "dim_nonpositive_observed": self.kappa_fd + self.kern_fd.dimension,
            "satisfied": self.bounds.satisfied,
        }
        return RunReport(
            config=_config_echo(cfg),
            potential_checks=checks,
            fd={
                "n_interior": cfg.n_fd,
                "spacing": self.grid.spacing,
                "kappa_minus": self.kappa_fd,
                "kernel": _kernel_dict(self.kern_fd),
                "eigenvalues_below_threshold": [float(v) for v in fd_below],
            },
            fourier={
                "n_modes": cfg.n_fourier,
                "kappa_minus": self.kappa_fourier,
                "kernel": _kernel_dict(self.kern_fourier),
                "kappa_minus_agrees": self.kappa_fourier == self.kappa_fd,
                "eigenvalues_below_threshold": [float(v) for v in fourier_below],
            },
            index=idx,
            bounds=bounds,
            fd_spectrum=self.h_spec.eigenvalues,
            fourier_spectrum=self.l_spec.eigenvalues,
        )

    def run_pencil(self, exactify: bool):
        """Diagonalize J L (optionally kernel-exactified) and classify."""
        cfg = self.cfg
        threshold = cfg.params.threshold
        l_mat = self.l_mat
        removed = None
        if exactify:
            l_mat, removed = kernel_exactify(l_mat, cfg.kernel_tol, threshold)
        j_signs = self.j.signs.copy()
        if cfg.inject_fault == "j_sign_flip":
            j_signs[len(j_signs) // 2 + 3] *= -1.0
        if cfg.inject_fault == "l_nonhermitian":
            l_mat = l_mat.copy()
            l_mat[0, 1] += 1e-3 * 1j * threshold
        a_mat = j_signs[:, None] * l_mat
        cs = eig_general(a_mat)
        classified, counts, diagnostics = classify_spectrum(
            cs, l_mat, cfg.tol_class, cfg.kernel_tol, threshold
        )
        sym = check_spectral_symmetries(
            cs,
            tol=SYMMETRY_TOL_FACTOR * threshold,
            exclude_radius=cfg.kernel_tol * threshold,
        )
        return cs, classified, counts, diagnostics, sym, removed

    def pencil_dict(self, classified, counts, diagnostics, sym, removed, exactified: bool) -> dict:
        unstable = [
            {"re": ev.z.real, "im": ev.z.imag, "class": ev.label}
            for ev in classified
            if ev.label not in (CLASS_NEAR_ZERO, "real_positive", "real_negative")
            or (ev.krein_negative is True)
        ]
        near_zero = [
            {"re": ev.z.real, "im": ev.z.imag} for ev in classified if ev.label == CLASS_NEAR_ZERO
        ]
        return {
            "exactified": exactified,
            "removed_kernel_eigenvalue": removed,
            "counts": {
                "kappa_c_plus": counts.kappa_c_plus,
                "kappa_imag_pos": counts.kappa_imag_pos,
                "kappa_quadrant_1": counts.kappa_quadrant_1,
                "kappa_real_pos_neg_krein": counts.kappa_real_pos_neg_krein,
                "kappa_ham_direct": counts.kappa_ham_direct,
            },
            "unstable_eigenvalues": unstable,
            "near_zero_eigenvalues": near_zero,
            "symmetry": {
                "mismatch_conj": sym.mismatch_conj,
                "mismatch_neg_conj": sym.mismatch_neg_conj,
                "tol": sym.tol,
                "n_excluded": sym.n_excluded,
                "passed": sym.passed,
            },
            "diagnostics": list(diagnostics),
        }


def analyze(cfg: RunConfig) -> RunReport:
    """Both discretizations, the counting formula and the bounds."""
    t0 = time.perf_counter()
    core = _Core(cfg)
    report = core.base_report()
    report.timing = {"total_s": time.perf_counter() - t0}
    return report


def pencil_run(cfg: RunConfig) -> RunReport:
    """Analysis plus the raw (non-exactified) pencil spectrum, classified."""
    t0 = time.perf_counter()
    core = _Core(cfg)
    report = core.base_report()
    cs, classified, counts, diagnostics, sym, removed = core.run_pencil(exactify=False)
    report.pencil = core.pencil_dict(classified, counts, diagnostics, sym, removed, False)
    report.pencil_spectrum = classified
    report.timing = {"total_s": time.perf_counter() - t0}
    return report


def validate(cfg: RunConfig) -> RunReport:
    """Cross-verify the index formula against the diagonalized pencil.

    Runs every consistency check at its fixed tolerance; the report's
    ``validation.all_passed`` decides the process exit status.
    """
    t0 = time.perf_counter()
    core = _Core(cfg)
    report = core.base_report()
    cs, classified, counts, diagnostics, sym, removed = core.run_pencil(exactify=True)
    report.pencil = core.pencil_dict(classified, counts, diagnostics, sym, removed, True)
    report.pencil_spectrum = classified

    threshold = cfg.params.threshold
    checks: list[dict] = []

    def record(name: str, passed: bool, detail: str):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    record(
        "kappa_minus_agreement",
        core.kappa_fd == core.kappa_fourier,
        f"fd {core.kappa_fd} vs fourier {core.kappa_fourier}",
    )
    record(
        "kernel_dim_agreement",
        core.kern_fd.dimension == core.kern_fourier.dimension,
        f"fd {core.kern_fd.dimension} vs fourier {core.kern_fourier.dimension}",
    )

    if core.kern_fd.dimension == 1 and core.kern_fourier.dimension == 1:
        d_v = core.d_v
        d_krein = core.d_krein
        if cfg.inject_fault == "dv_negate":
            d_krein = -d_krein
        err = abs(d_krein - d_v) / max(abs(d_v), 1e-12)
        record(
            "dv_cross_formula",
            err <= DV_CROSS_RTOL,
            f"d_v {d_v:.9e} vs d_krein {d_krein:.9e} (rel err {err:.3e})",
        )

    formula = core.formula
    if cfg.inject_fault == "kappa_shift":
        formula = kappa_ham_formula(
            core.kappa_fd + 1, core.kern_fd.dimension, core.d_v, core.degeneracy_tol
        )
    identity_ok, identity_record = kappa_ham_direct_vs_formula(counts, formula)
    record(
        "index_identity",
        identity_ok,
        f"direct {identity_record['kappa_ham_direct']} vs formula {identity_record['kappa_ham_formula']}",
    )

    record(
        "pontryagin_bound",
        counts.kappa_c_plus <= core.kappa_fourier,
        f"kappa_C+ {counts.kappa_c_plus} <= kappa_-(L) {core.kappa_fourier}",
    )
    record(
        "symmetry_conj",
        sym.mismatch_conj <= sym.tol,
        f"mismatch {sym.mismatch_conj:.3e} vs tol {sym.tol:.3e}",
    )
    record(
        "symmetry_neg_conj",
        sym.mismatch_neg_conj <= sym.tol,
        f"mismatch {sym.mismatch_neg_conj:.3e} vs tol {sym.tol:.3e}",
    )
    if core.bargmann is not None:
        record(
            "bargmann_bound",
            core.kappa_fd <= core.bargmann,
            f"kappa_- {core.kappa_fd} <= {core.bargmann:.6f}",
        )
    record(
        "birman_schwinger_bound",
        core.kappa_fd + core.kern_fd.dimension <= core.birman_schwinger,
        f"kappa_- + ker {core.kappa_fd + core.kern_fd.dimension} <= {core.birman_schwinger:.6f}",
    )

    if not np.any(cfg.potential.profile(core.fgrid.nodes)):
        eps = GAP_EPS_FACTOR * threshold
        moduli = np.abs(cs.eigenvalues)
        gap_clear = not np.any(moduli < threshold - eps)
        lam_min = float(core.l_spec.eigenvalues[0])
        record(
            "free_gap",
            gap_clear and abs(lam_min - threshold) <= 0.01 * threshold,
            f"min Hermitian eigenvalue {lam_min:.6f} vs 2bc {threshold:.6f}; gap clear: {gap_clear}",
        )

    all_passed = all(ch["passed"] for ch in checks)
    report.validation = {"checks": checks, "all_passed": all_passed}
    report.timing = {"total_s": time.perf_counter() - t0}
    return report


def _branch_eigenvalues(pot, params, grid: Grid, branch: int):
    """Eigenvalues branch-1..branch+1 of the FD matrix (Sturm bisection, no vectors)."""
    m = assemble_h(pot, params, grid)
    lo = max(0, branch - 1)
    hi = min(grid.n_interior - 1, branch + 1)
    vals = scipy.linalg.eigh_tridiagonal(
        m.diagonal, m.off_diagonal, eigvals_only=True, select="i", select_range=(lo, hi)
    )
    return vals, lo


def sweep(cfg: RunConfig) -> RunReport:
    """Locate kernel crossings of one eigenvalue branch of H over s * V.

    Coarse scan over [s_min, s_max], bracket sign changes of the branch
    eigenvalue, bisect each bracket to |lambda| <= bisect_tol * 2bc, then
    run the full analysis at every crossing.  Distinct scan points run in
    parallel, capped by KREIN_INDEX_THREADS.
    """
    if cfg.branch < 0 or cfg.branch >= cfg.n_fd:
        raise ConfigError(f"branch index {cfg.branch} out of range for n_fd={cfg.n_fd}")
    t0 = time.perf_counter()
    base = cfg.potential
    params = cfg.params
    grid = Grid(cfg.half_width, cfg.n_fd)
    k = cfg.branch

    def branch_value(s: float) -> float:
        vals, lo = _branch_eigenvalues(Scaled(base, s), params, grid, k)
        return float(vals[k - lo])

    svals = np.linspace(cfg.s_min, cfg.s_max, cfg.coarse_points)
    threads = os.environ.get("KREIN_INDEX_THREADS")
    max_workers = max(1, int(threads)) if threads else min(8, os.cpu_count() or 1)

    def scan_point(s: float):
        vals, lo = _branch_eigenvalues(Scaled(base, s), params, grid, k)
        lam = float(vals[k - lo])
        gap = float(np.min(np.abs(np.diff(vals)))) if vals.size > 1 else math.inf
        return lam, gap

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        scanned = list(pool.map(scan_point, svals))
    lams = np.array([t[0] for t in scanned])
    min_gap = min(t[1] for t in scanned)

    notes = []
    if min_gap < 1e-8:
        notes.append(f"branch gap dips to {min_gap:.3e}; eigenvalue crossing suspected")

    target = cfg.bisect_tol * params.threshold
    crossings = []
    for i in range(len(svals) - 1):
        a, b = float(svals[i]), float(svals[i + 1])
        fa, fb = float(lams[i]), float(lams[i + 1])
        if fa == 0.0 or fa * fb < 0.0:
            for _ in range(200):
                mid = 0.5 * (a + b)
                fm = branch_value(mid)
                if abs(fm) <= target:
                    a = b = mid
                    break
                if fa * fm < 0.0:
                    b, fb = mid, fm
                else:
                    a, fa = mid, fm
            s_star = 0.5 * (a + b)
            crossings.append(s_star)

    crossing_reports = []
    for s_star in crossings:
        sub = replace(
            cfg,
            potential=Scaled(base, s_star),
            mode="analyze",
            inject_fault=None,
        )
        sub_core = _Core(sub)
        crossing_reports.append(
            {
                "s": s_star,
                "branch": k,
                "branch_eigenvalue": branch_value(s_star),
                "kappa_minus": sub_core.kappa_fd,
                "kernel_dim": sub_core.kern_fd.dimension,
                "d_v": sub_core.d_v,
                "verdict": sub_core.formula.verdict,
            }
        )

    core = _Core(replace(cfg, mode="analyze"))
    report = core.base_report()
    report.config["sweep"] = {
        "s_min": cfg.s_min,
        "s_max": cfg.s_max,
        "branch": k,
        "bisect_tol": cfg.bisect_tol,
        "coarse_points": cfg.coarse_points,
    }
    report.crossings = crossing_reports
    if notes:
        report.config["sweep"]["notes"] = notes
    report.config["sweep"]["coarse_scan"] = [
        {"s": float(s), "branch_eigenvalue": float(v)} for s, v in zip(svals, lams)
    ]
    report.timing = {"total_s": time.perf_counter() - t0}
    return report


# -- deterministic serialization ------------------------------------------

def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    if x == int(x) and abs(x) < 1e16:
        return format(x, ".1f")
    return format(x, ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """JSON text with stable key order and 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [dumps_canonical(v, indent + 1) for v in obj]
        if not items:
            return "[]"
        return "[\n" + ",\n".join(inner + s for s in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        items = [f'{inner}"{k}": {dumps_canonical(v, indent + 1)}' for k, v in obj.items()]
        if not items:
            return "{}"
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(report: RunReport, out: str, emit_csv: bool = False) -> list[str]:
    """Write the canonical JSON report and optional spectra CSVs.

    Returns the list of paths written.  ``out`` is used as a prefix
    (``<out>.json`` etc.) unless it already ends in ``.json``.
    """
    prefix = out[: -len(".json")] if out.endswith(".json") else out
    parent = os.path.dirname(prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)
    written = []
    json_path = prefix + ".json"
    with open(json_path, "w") as fh:
        fh.write(dumps_canonical(report.to_json_dict()))
        fh.write("\n")
    written.append(json_path)
    if emit_csv:
        if report.fd_spectrum is not None:
            path = prefix + "_fd_spectrum.csv"
            _write_hermitian_csv(path, report.fd_spectrum)
            written.append(path)
        if report.fourier_spectrum is not None:
            path = prefix + "_fourier_spectrum.csv"
            _write_hermitian_csv(path, report.fourier_spectrum)
            written.append(path)
        if report.pencil_spectrum is not None:
            path = prefix + "_pencil_spectrum.csv"
            with open(path, "w") as fh:
                fh.write("index,re,im,class\n")
                for i, ev in enumerate(report.pencil_spectrum):
                    fh.write(
                        f"{i},{format(ev.z.real, '.17g')},{format(ev.z.imag, '.17g')},{ev.label}\n"
                    )
            written.append(path)
    return written


def _write_hermitian_csv(path: str, eigenvalues: np.ndarray):
    with open(path, "w") as fh:
        fh.write("index,eigenvalue\n")
        for i, v in enumerate(eigenvalues):
            fh.write(f"{i},{format(float(v), '.17g')}\n")
