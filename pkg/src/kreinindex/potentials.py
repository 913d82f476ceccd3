"""Real-valued potentials V(x) on the line and their integral diagnostics.

The built-in families are smooth wells plus sampled data with
compact-support (zero) extension.  Window integrals of |V| certify the
decay hypothesis under which the rest of the package operates: the
essential spectra and the index formula all presume that
``sup_n int_n^{n+1} |V|`` is finite and the window integrals vanish at
infinity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "ProblemParams",
    "Potential",
    "PoschlTeller",
    "GaussianWell",
    "SquareWell",
    "Sampled",
    "Sum",
    "Scaled",
    "ZeroPotential",
    "evaluate",
    "window_integral",
    "m_v",
    "decay_defect",
    "negative_part_moments",
    "load_sampled_csv",
]


@dataclass(frozen=True)
class ProblemParams:
    """The positive constants b (mass-like) and c (wave-speed-like)."""

    b: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.b > 0 and self.c > 0):
            raise ConfigError(f"b and c must be positive, got b={self.b}, c={self.c}")

    @property
    def threshold(self) -> float:
        """Edge 2bc of the essential spectrum of the half-derivative model."""
        return 2.0 * self.b * self.c


class Potential:
    """Base class: a real-valued potential evaluable on arrays of x."""

    def profile(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        """Abscissae where the potential is not smooth (quadrature splits here)."""
        return ()


@dataclass(frozen=True)
class PoschlTeller(Potential):
    """sech^2 well: ``scale * sech(x)^2``.

    ``nu`` labels the family member; when ``scale`` is omitted it defaults
    to ``-nu*(nu+1)`` so the well carries exactly ``nu`` bound states below
    the continuum for b = c = 1.
    """

    nu: float = 2.0
    scale: float | None = None

    def __post_init__(self):
        if self.nu <= 0:
            raise ConfigError(f"nu must be positive, got {self.nu}")
        if self.scale is None:
            object.__setattr__(self, "scale", -self.nu * (self.nu + 1.0))

    def profile(self, x):
        return self.scale / np.cosh(x) ** 2


@dataclass(frozen=True)
class GaussianWell(Potential):
    """Gaussian bump ``depth * exp(-((x - center)/width)^2)``."""

    depth: float
    width: float
    center: float = 0.0

    def __post_init__(self):
        if self.width <= 0:
            raise ConfigError(f"width must be positive, got {self.width}")

    def profile(self, x):
        return self.depth * np.exp(-(((x - self.center) / self.width) ** 2))


@dataclass(frozen=True)
class SquareWell(Potential):
    """Piecewise-constant well: ``depth`` on [-half_width, half_width], else 0."""

    depth: float
    half_width: float

    def __post_init__(self):
        if self.half_width <= 0:
            raise ConfigError(f"half_width must be positive, got {self.half_width}")

    def profile(self, x):
        return np.where(np.abs(x) <= self.half_width, self.depth, 0.0)

    def breakpoints(self):
        return (-self.half_width, self.half_width)


@dataclass(frozen=True)
class Sampled(Potential):
    """Tabulated potential, linear interpolation inside, zero outside.

    The grid must be strictly ascending with at least two nodes; the zero
    extension keeps the decay hypothesis trivially satisfied.
    """

    xs: np.ndarray
    vs: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        vs = np.asarray(self.vs, dtype=float)
        if xs.ndim != 1 or xs.size < 2 or xs.shape != vs.shape:
            raise ConfigError("sampled potential needs matching 1-d arrays with >= 2 nodes")
        if not np.all(np.diff(xs) > 0):
            raise ConfigError("sampled potential grid must be strictly ascending")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "vs", vs)

    def profile(self, x):
        return np.interp(x, self.xs, self.vs, left=0.0, right=0.0)

    def breakpoints(self):
        return tuple(self.xs)


@dataclass(frozen=True)
class Sum(Potential):
    """Pointwise sum of potentials."""

    parts: tuple[Potential, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def profile(self, x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        for p in self.parts:
            out = out + p.profile(x)
        return out

    def breakpoints(self):
        pts: list[float] = []
        for p in self.parts:
            pts.extend(p.breakpoints())
        return tuple(sorted(set(pts)))


@dataclass(frozen=True)
class Scaled(Potential):
    """``s * base(x)``; Scaled(base, 1) evaluates identically to base."""

    base: Potential
    s: float

    def profile(self, x):
        if self.s == 0.0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return self.s * self.base.profile(x)

    def breakpoints(self):
        return self.base.breakpoints()


@dataclass(frozen=True)
class ZeroPotential(Potential):
    """V identically zero (the free problem)."""

    def profile(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


def evaluate(p: Potential, x) -> float | np.ndarray:
    """Evaluate V at x (scalar in, scalar out; array in, array out)."""
    arr = p.profile(np.asarray(x, dtype=float))
    if np.ndim(x) == 0:
        return float(arr)
    return arr


def _simpson(f, a: float, b: float, n_intervals: int) -> float:
    """Composite Simpson with an even number of uniform intervals.

    Endpoint nodes are nudged inward by a relative 1e-12 so that pieces
    split at a jump integrate their own one-sided values exactly.
    """
    n = max(2, n_intervals + (n_intervals % 2))
    t = np.linspace(a, b, n + 1)
    nudge = 1e-12 * (b - a)
    t[0] += nudge
    t[-1] -= nudge
    y = f(t)
    h = (b - a) / n
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def _split_integrate(f, a: float, b: float, quad_points: int, cuts) -> float:
    """Simpson on [a, b] with nodes aligned to the interior breakpoints."""
    inner = sorted(c for c in cuts if a < c < b)
    edges = [a, *inner, b]
    total = 0.0
    length = b - a
    for lo, hi in zip(edges[:-1], edges[1:]):
        n = max(2, int(round(quad_points * (hi - lo) / length)))
        total += _simpson(f, lo, hi, n)
    return total


def window_integral(p: Potential, x: float, quad_points: int = 512) -> float:
    """Quadrature value of ``int_x^{x+1} |V(s)| ds``.

    Simpson nodes are placed at the potential's breakpoints so the value
    is exact for piecewise-constant wells.
    """
    if quad_points < 2:
        raise ConfigError("quad_points must be >= 2")
    return _split_integrate(lambda t: np.abs(p.profile(t)), x, x + 1.0, quad_points, p.breakpoints())


def m_v(p: Potential, search_half_width: float, quad_points: int = 512) -> float:
    """Max window integral over integer windows [n, n+1], |n| <= search_half_width.

    A lower bound on the true sup over all of R; exact for compactly
    supported potentials once the support is covered.
    """
    n_max = int(np.floor(search_half_width))
    best = 0.0
    for n in range(-n_max, n_max + 1):
        best = max(best, window_integral(p, float(n), quad_points))
    return best


def decay_defect(p: Potential, tail_start: float, tail_end: float, quad_points: int = 512) -> float:
    """Max window integral over unit windows inside {tail_start <= |x| <= tail_end}.

    Windows are [n, n+1] on the right and [-n-1, -n] on the left for
    integer n in the tail, so both tails are probed at equal distance.
    Small values certify, at desk scale, that the window integrals of |V|
    vanish at infinity.
    """
    if not tail_end > tail_start:
        raise ConfigError("tail_end must exceed tail_start")
    best = 0.0
    for n in range(int(np.ceil(tail_start)), int(np.floor(tail_end)) + 1):
        best = max(best, window_integral(p, float(n), quad_points))
        best = max(best, window_integral(p, float(-n - 1), quad_points))
    return best


def negative_part_moments(
    p: Potential, params: ProblemParams, half_width: float, quad_points: int = 4096
) -> tuple[float, float]:
    """Moments of the negative parts of V over [-half_width, half_width].

    Returns ``(int |x| |min(V + b^2, 0)| dx, int |V_-| dx)`` with
    ``V_- = (V - |V|)/2``; both arguments of the counting bounds.
    """
    if quad_points < 2:
        raise ConfigError("quad_points must be >= 2")
    b2 = params.b ** 2
    cuts = p.breakpoints()

    def first(t):
        return np.abs(t) * np.abs(np.minimum(p.profile(t) + b2, 0.0))

    def second(t):
        v = p.profile(t)
        return np.abs((v - np.abs(v)) / 2.0)

    # split at 0 so |x| has a quadrature node at its kink
    cuts0 = tuple(cuts) + (0.0,)
    m1 = _split_integrate(first, -half_width, half_width, quad_points, cuts0)
    m2 = _split_integrate(second, -half_width, half_width, quad_points, cuts)
    return m1, m2


def load_sampled_csv(path) -> Sampled:
    """Read a two-column (x, value) CSV with a header row."""
    xs: list[float] = []
    vs: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ConfigError(f"{path}: empty CSV")
        for row in reader:
            if not row:
                continue
            if len(row) < 2:
                raise ConfigError(f"{path}: expected two columns, got {row!r}")
            xs.append(float(row[0]))
            vs.append(float(row[1]))
    return Sampled(xs=np.asarray(xs), vs=np.asarray(vs))
