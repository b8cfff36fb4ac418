"""
Special affine (equiaffine) invariants of curves in R^n.

For a regular curve the derivative frame W = (C', ..., C^(n)) has positive
determinant g. The unimodular frame is alpha = W / g**(1/n); its
Maurer-Cartan pullback alpha^-1 alpha' has ones on the subdiagonal, the
scalar ``a = -X_n / n`` on the diagonal and ``X + a e_n`` as last column,
where X solves W X = C^(n+1).

The natural parameter has density ``g ** (2 / (n (n + 1)))``; in it g == 1,
X_n == 0 and the curvatures are chi_i = X_i, i < n.

Most functions accept a :class:`DerivativeJet` or a raw array of shape
``(..., n + 1, n)`` (row k - 1 = C^(k)) and broadcast over the batch axes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _series, numlin
from .curvekit import CurveProvider, DerivativeJet, jet_stack
from .errors import (
    DegenerateCurve,
    NonMonotone,
    NotNaturalParameter,
    OrientationViolation,
    TableMismatch,
)

DEG_RTOL = 1e-9
NATURAL_TOL = 1e-6
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _derivs(j) -> np.ndarray:
    if isinstance(j, DerivativeJet):
        return j.derivs
    d = np.asarray(j, dtype=float)
    if d.ndim < 2 or d.shape[-2] != d.shape[-1] + 1:
        raise ValueError(f"jet array must have shape (..., n + 1, n), got {d.shape}")
    return d


def _frame(d: np.ndarray) -> np.ndarray:
    n = d.shape[-1]
    return np.swapaxes(d[..., :n, :], -1, -2)


def deg_threshold(j) -> np.ndarray:
    """Relative degeneracy bound 1e-9 * (max derivative norm)**n."""
    d = _derivs(j)
    n = d.shape[-1]
    scale = np.linalg.norm(d[..., :n, :], axis=-1).max(axis=-1)
    return DEG_RTOL * scale**n


def gram_det(j):
    """det(C', ..., C^(n)), sign preserved."""
    return numlin.det(_frame(_derivs(j)))


def _require_regular(d: np.ndarray, g: np.ndarray, t=None):
    bad = ~(g > deg_threshold(d))
    if np.any(bad):
        where = None
        if t is not None:
            where = float(np.broadcast_to(t, np.shape(g))[bad].flat[0])
        raise DegenerateCurve(
            f"derivative frame is degenerate (det = {np.min(g):.3e})" + (f" at t = {where!r}" if where is not None else ""),
            t=where,
        )


@dataclass(frozen=True)
class RegularityReport:
    passed: bool
    min_det: float
    t_min: float
    npts: int


def check_regular(c: CurveProvider, grid) -> RegularityReport:
    """Raise unless det(C', ..., C^(n)) > eps_deg at every grid point.

    A negative determinant anywhere is an orientation violation; values
    within the degeneracy threshold of zero are degenerate.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    d = jet_stack(c, grid)
    g = gram_det(d)
    g = np.atleast_1d(g)
    eps = deg_threshold(d)
    k = int(np.argmin(g))
    if np.any(g < -eps):
        i = int(np.argmax(g < -eps))
        raise OrientationViolation(
            f"negative frame determinant {g[i]:.6g} at t = {grid[i]!r}; reverse the parametrization", t=float(grid[i])
        )
    if np.any(g <= eps):
        i = int(np.argmax(g <= eps))
        raise DegenerateCurve(f"frame determinant {g[i]:.3e} vanishes at t = {grid[i]!r}", t=float(grid[i]))
    return RegularityReport(passed=True, min_det=float(g[k]), t_min=float(grid[k]), npts=grid.size)


def frame_alpha(j) -> np.ndarray:
    """Unimodular frame: derivative columns scaled by det**(-1/n)."""
    d = _derivs(j)
    n = d.shape[-1]
    g = np.asarray(gram_det(d))
    _require_regular(d, g, getattr(j, "t", None))
    return _frame(d) * (g ** (-1.0 / n))[..., None, None]


def cramer_coeffs(j) -> np.ndarray:
    """X_i = det(C', .., C^(n+1) in slot i, .., C^(n)) / det(C', ..., C^(n))."""
    d = _derivs(j)
    n = d.shape[-1]
    W = _frame(d)
    g = np.asarray(numlin.det(W))
    _require_regular(d, g, getattr(j, "t", None))
    X = np.empty(d.shape[:-2] + (n,))
    for i in range(n):
        Wi = W.copy()
        Wi[..., :, i] = d[..., n, :]
        X[..., i] = numlin.det(Wi) / g
    return X


@dataclass(frozen=True)
class PullbackMatrix:
    """alpha^-1 d(alpha)/dt in companion form; ``x`` are the Cramer coefficients."""

    n: int
    a: float
    x: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        n = self.n
        m = np.diag(np.full(n, self.a)) + np.diag(np.ones(n - 1), -1)
        m[:, -1] += self.x
        return m

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))


def pullback(j) -> PullbackMatrix:
    d = _derivs(j)
    if d.ndim != 2:
        raise ValueError("pullback takes a single jet")
    x = cramer_coeffs(d if not isinstance(j, DerivativeJet) else j)
    n = d.shape[-1]
    return PullbackMatrix(n=n, a=float(-x[-1] / n), x=x)


def arc_density(j) -> np.ndarray:
    """det(C', ..., C^(n)) ** (2 / (n (n + 1)))."""
    d = _derivs(j)
    n = d.shape[-1]
    g = np.asarray(gram_det(d))
    return np.abs(g) ** (2.0 / (n * (n + 1)))


def cumulative_simpson(f: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral on a uniform odd-sized grid.

    Even nodes get composite Simpson sums; odd nodes add the
    quadratic-exact half-panel rule h/12 (5 f0 + 8 f1 - f2).
    """
    m = f.size
    out = np.zeros(m)
    panels = h / 3.0 * (f[0:-2:2] + 4.0 * f[1:-1:2] + f[2::2])
    out[2::2] = np.cumsum(panels)
    half = h / 12.0 * (5.0 * f[0:-2:2] + 8.0 * f[1:-1:2] - f[2::2])
    out[1:-1:2] = out[0:-2:2] + half
    return out


@dataclass(frozen=True)
class ArcLengthTable:
    n: int
    t: np.ndarray
    sigma: np.ndarray

    @property
    def length(self) -> float:
        return float(self.sigma[-1])

    def to_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "sigma"])
        for t, s in zip(self.t, self.sigma):
            w.writerow([f"{t:.17g}", f"{s:.17g}"])


def arc_length(c: CurveProvider, a: float | None = None, b: float | None = None, npts: int = 2001) -> ArcLengthTable:
    """Cumulative special affine arc length on a uniform grid over [a, b]."""
    a = c.domain[0] if a is None else float(a)
    b = c.domain[1] if b is None else float(b)
    npts = max(3, int(npts))
    if npts % 2 == 0:
        npts += 1
    t = np.linspace(a, b, npts)
    check_regular(c, t)
    rho = arc_density(jet_stack(c, t))
    sigma = cumulative_simpson(rho, (b - a) / (npts - 1))
    if not np.all(np.diff(sigma) > 0):
        raise NonMonotone("arc-length table is not strictly increasing")
    return ArcLengthTable(n=c.n, t=t, sigma=sigma)


class NaturalCurve(CurveProvider):
    """``base`` reparametrized by special affine arc length s in [0, L].

    t(s) starts from a monotone cubic interpolant of the table and is
    polished by Newton steps on sigma(t) = table node + local Gauss-Legendre
    integral of the density. Derivatives in s come from Taylor-series
    composition: the density series (from base derivatives up to order
    n + k - 1) is integrated, inverted, and substituted into the base
    series. Nothing is differentiated numerically.
    """

    def __init__(self, base: CurveProvider, table: ArcLengthTable):
        if table.n != base.n:
            raise TableMismatch(f"table is for n = {table.n}, curve has n = {base.n}")
        lo, hi = base.domain
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        if table.t[0] < lo - slack or table.t[-1] > hi + slack:
            raise TableMismatch(f"table range [{table.t[0]}, {table.t[-1]}] exceeds curve domain {base.domain}")
        if table.sigma[0] != 0.0 or not np.all(np.diff(table.sigma) > 0):
            raise TableMismatch("arc-length table must start at 0 and increase strictly")
        self.base = base
        self.table = table
        self.n = base.n
        self.domain = (0.0, table.length)
        self.max_order = base.max_order - base.n + 1
        self._inverse = PchipInterpolator(table.sigma, table.t)
        self._p = 2.0 / (self.n * (self.n + 1))

    def sigma_of_t(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tn = self.table.t
        k = np.clip(np.searchsorted(tn, t, side="right") - 1, 0, tn.size - 2)
        t0 = tn[k]
        half = 0.5 * (t - t0)
        pts = (t0 + half)[:, None] + half[:, None] * _GL_NODES[None, :]
        rho = arc_density(jet_stack(self.base, pts.ravel())).reshape(pts.shape)
        return self.table.sigma[k] + half * (rho @ _GL_WEIGHTS)

    def t_of_s(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        lo, hi = self.table.t[0], self.table.t[-1]
        t = np.clip(self._inverse(s), lo, hi)
        for _ in range(8):
            r = self.sigma_of_t(t) - s
            step = r / arc_density(jet_stack(self.base, t))
            t = np.clip(t - step, lo, hi)
            if np.max(np.abs(step)) <= 4 * np.finfo(float).eps * max(1.0, abs(lo), abs(hi)):
                break
        return t

    def _derivatives(self, s, order):
        t = self.t_of_s(s)
        if order == 0:
            return self.base.derivatives(t, 0)
        n = self.n
        K = order + 1
        base_order = max(order, n + order - 1)
        D = self.base.derivatives(t, base_order)  # (m, base_order + 1, n)
        coeffs = _series.from_derivatives(np.moveaxis(D, 1, 0))  # (base_order + 1, m, n)
        # column i (C^(i+1)) as a series: coefficient j = C^(i+1+j)(t) / j!
        J = K - 1
        cols = np.stack(
            [_series.from_derivatives(np.moveaxis(D[:, i + 1: i + 1 + J], 1, 0)) for i in range(n)]
        )
        g = _series.det_series(cols, J, numlin.det)
        rho = _series.power(g, self._p, J)
        sig = _series.integrate(rho, K)
        u = _series.revert(sig, K)
        gamma = _series.compose_vector(coeffs[:K], u, K)
        return np.moveaxis(_series.to_derivatives(gamma), 0, 1)


def reparametrize(c: CurveProvider, table: ArcLengthTable) -> NaturalCurve:
    return NaturalCurve(c, table)


def natural_curve(c: CurveProvider, quad_npts: int = 2001) -> NaturalCurve:
    return NaturalCurve(c, arc_length(c, npts=quad_npts))


def curvatures(j, tol: float = NATURAL_TOL) -> np.ndarray:
    """chi_1, ..., chi_{n-1} from a jet taken in the natural parameter."""
    d = _derivs(j)
    n = d.shape[-1]
    g = np.asarray(gram_det(d))
    x = cramer_coeffs(d)
    if np.any(np.abs(g - 1.0) > tol):
        raise NotNaturalParameter(f"frame determinant {np.max(np.abs(g - 1.0)):.3e} away from 1")
    if np.any(np.abs(x[..., n - 1]) > tol):
        raise NotNaturalParameter(f"|X_n| = {np.max(np.abs(x[..., n - 1])):.3e} exceeds {tol}")
    return x[..., : n - 1]


@dataclass(frozen=True)
class InvariantProfile:
    """Curvatures sampled on a uniform grid of the natural parameter."""

    n: int
    s: np.ndarray
    chi: np.ndarray  # (npts, n - 1)

    def __post_init__(self):
        if self.chi.shape != (self.s.size, self.n - 1):
            raise ValueError(f"profile needs {self.n - 1} channels on {self.s.size} points, got {self.chi.shape}")
        if not np.all(np.isfinite(self.chi)):
            raise ValueError("profile has non-finite curvature values")

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def header(self) -> list[str]:
        return ["s"] + [f"chi_{i}" for i in range(1, self.n)]

    def to_csv(self, fh=None) -> str | None:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for s, row in zip(self.s, self.chi):
            w.writerow([f"{s:.17g}"] + [f"{v:.17g}" for v in row])
        return buf.getvalue() if fh is None else None


def profile_of_natural(nat: CurveProvider, npts: int = 501, tol: float = NATURAL_TOL) -> InvariantProfile:
    lo, hi = nat.domain
    s = np.linspace(lo, hi, npts)
    chi = curvatures(jet_stack(nat, s), tol=tol)
    return InvariantProfile(n=nat.n, s=s - lo, chi=chi)


def invariant_profile(c: CurveProvider, npts: int = 501, quad_npts: int = 2001, tol: float = NATURAL_TOL) -> InvariantProfile:
    """arc_length -> reparametrize -> curvatures on a uniform s-grid."""
    return profile_of_natural(natural_curve(c, quad_npts), npts, tol=tol)
