"""
Curve descriptions and derivative jets.

A provider maps parameter values to derivative stacks: ``derivatives(t, k)``
returns an array of shape ``(len(t), k + 1, n)`` whose entry ``[:, j]`` is
C^(j)(t) (entry 0 is the position). Polynomial and catalog curves are exact
to rounding at any order; sampled curves use central finite differences.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    BadParams,
    InsufficientSamples,
    OutOfDomain,
    UnknownCatalogName,
    UnsupportedOrder,
)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class DerivativeJet:
    """C'(t), ..., C^(n+1)(t) at a single parameter value.

    ``derivs[k - 1]`` is C^(k); ``frame`` stacks C', ..., C^(n) as columns.
    """

    n: int
    t: float
    derivs: np.ndarray
    position: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.derivs, dtype=float)
        if d.shape != (self.n + 1, self.n):
            raise ValueError(f"jet needs {self.n + 1} derivative vectors of length {self.n}, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise ValueError("jet has non-finite entries")
        object.__setattr__(self, "derivs", d)
        if self.position is not None:
            object.__setattr__(self, "position", np.asarray(self.position, dtype=float))

    @property
    def frame(self) -> np.ndarray:
        return self.derivs[: self.n].T

    @property
    def top(self) -> np.ndarray:
        """C^(n+1)(t)."""
        return self.derivs[self.n]


class CurveProvider(ABC):
    """A curve C: [a, b] -> R^n that can report its derivatives.

    Subclasses set ``n``, ``domain`` and ``max_order`` (the highest
    derivative they can supply honestly) and implement ``_derivatives``.
    """

    n: int
    domain: tuple[float, float]
    max_order: int
    # closed forms remain valid outside ``domain``
    analytic: bool = False

    def derivatives(self, t, order: int | None = None) -> np.ndarray:
        if order is None:
            order = self.n + 1
        if order > self.max_order:
            raise UnsupportedOrder(
                f"{type(self).__name__} supplies derivatives up to order {self.max_order}, {order} requested"
            )
        t = np.atleast_1d(np.asarray(t, dtype=float))
        self._check_domain(t)
        return self._derivatives(t, order)

    def position(self, t) -> np.ndarray:
        return self.derivatives(t, 0)[:, 0]

    def _check_domain(self, t):
        a, b = self.domain
        slack = 1e-12 * max(1.0, abs(a), abs(b))
        bad = (t < a - slack) | (t > b + slack)
        if np.any(bad):
            raise OutOfDomain(f"t = {t[bad][0]!r} outside domain [{a}, {b}]")

    @abstractmethod
    def _derivatives(self, t: np.ndarray, order: int) -> np.ndarray: ...


def eval_jet(c: CurveProvider, t: float) -> DerivativeJet:
    d = c.derivatives([t], c.n + 1)[0]
    return DerivativeJet(n=c.n, t=float(t), derivs=d[1:], position=d[0])


def jet_stack(c: CurveProvider, ts) -> np.ndarray:
    """Batched jets: shape (len(ts), n + 1, n), row k - 1 holding C^(k)."""
    return c.derivatives(ts, c.n + 1)[:, 1:]


class PolynomialCurve(CurveProvider):
    """Component-wise polynomial, coefficients in ascending degree."""

    analytic = True

    def __init__(self, coeffs, domain=(0.0, 1.0)):
        self.coeffs = [np.trim_zeros(np.asarray(c, dtype=float), "b") for c in coeffs]
        self.coeffs = [c if c.size else np.zeros(1) for c in self.coeffs]
        self.n = len(self.coeffs)
        if self.n < 2:
            raise BadParams("polynomial curve needs n >= 2 components")
        if max(c.size for c in self.coeffs) < 2:
            raise BadParams("polynomial curve is constant")
        self.domain = (float(domain[0]), float(domain[1]))
        if not self.domain[0] < self.domain[1]:
            raise BadParams(f"empty domain {domain}")
        self.max_order = 64

    def _derivatives(self, t, order):
        out = np.zeros((t.size, order + 1, self.n))
        for i, c in enumerate(self.coeffs):
            for k in range(order + 1):
                if k >= c.size:
                    break
                out[:, k, i] = P.polyval(t, P.polyder(c, k))
        return out


def _trig(t, k, base):
    """k-th derivative of cos (base=0) or sin (base=1)."""
    phase = (k + base * 3) % 4  # sin = cos shifted by -pi/2
    return (np.cos(t), -np.sin(t), -np.cos(t), np.sin(t))[phase]


class Ellipse(CurveProvider):
    """t -> (a cos t, b sin t)."""

    analytic = True

    def __init__(self, a: float, b: float, domain=(0.0, 2 * np.pi)):
        if not (a > 0 and b > 0):
            raise BadParams(f"ellipse axes must be positive, got ({a}, {b})")
        self.a, self.b = float(a), float(b)
        self.n = 2
        self.domain = tuple(map(float, domain))
        self.max_order = 64

    def _derivatives(self, t, order):
        out = np.empty((t.size, order + 1, 2))
        for k in range(order + 1):
            out[:, k, 0] = self.a * _trig(t, k, 0)
            out[:, k, 1] = self.b * _trig(t, k, 1)
        return out


class Helix(CurveProvider):
    """t -> (a cos t, b sin t, c t)."""

    analytic = True

    def __init__(self, a: float, b: float, c: float, domain=(0.0, 2 * np.pi)):
        if not (a > 0 and b > 0 and c > 0):
            raise BadParams(f"helix parameters must be positive, got ({a}, {b}, {c})")
        self.a, self.b, self.c = float(a), float(b), float(c)
        self.n = 3
        self.domain = tuple(map(float, domain))
        self.max_order = 64

    def _derivatives(self, t, order):
        out = np.zeros((t.size, order + 1, 3))
        for k in range(order + 1):
            out[:, k, 0] = self.a * _trig(t, k, 0)
            out[:, k, 1] = self.b * _trig(t, k, 1)
        out[:, 0, 2] = self.c * t
        if order >= 1:
            out[:, 1, 2] = self.c
        return out


def moment_curve(n: int, domain=(0.0, 1.0)) -> PolynomialCurve:
    """t -> (t, t^2, ..., t^n)."""
    if int(n) != n or n < 2:
        raise BadParams(f"moment curve needs integer n >= 2, got {n}")
    n = int(n)
    coeffs = [[0.0] * k + [1.0] for k in range(1, n + 1)]
    curve = PolynomialCurve(coeffs, domain)
    return curve


CATALOG = {
    "ellipse": 2,
    "circle": 1,
    "moment": 1,
    "helix": 3,
    "parabola": 0,
}


def make_catalog(name: str, params=(), domain=None) -> CurveProvider:
    """Closed-form curve by name.

    ellipse(a, b) and circle(r) live on [0, 2pi], helix(a, b, c) is
    (a cos t, b sin t, c t) on [0, 2pi], moment(n) is (t, ..., t^n) on
    [0, 1] and parabola is (t, t^2) on [-1, 1].
    """
    if name not in CATALOG:
        raise UnknownCatalogName(f"unknown catalog curve {name!r}; known: {', '.join(CATALOG)}")
    params = [float(p) for p in params]
    if len(params) != CATALOG[name]:
        raise BadParams(f"{name} takes {CATALOG[name]} parameter(s), got {len(params)}")
    kw = {} if domain is None else {"domain": domain}
    if name == "ellipse":
        return Ellipse(*params, **kw)
    if name == "circle":
        if not params[0] > 0:
            raise BadParams(f"circle radius must be positive, got {params[0]}")
        return Ellipse(params[0], params[0], **kw)
    if name == "helix":
        return Helix(*params, **kw)
    if name == "moment":
        return moment_curve(params[0], **kw)
    return PolynomialCurve([[0.0, 1.0], [0.0, 0.0, 1.0]], domain if domain is not None else (-1.0, 1.0))


@lru_cache(maxsize=None)
def _stencil_exact(order: int, deriv: int) -> tuple[Fraction, ...]:
    m = (deriv + 1) // 2 - 1 + order // 2
    offsets = [Fraction(j) for j in range(-m, m + 1)]
    # Fornberg's recursion in exact arithmetic
    N = len(offsets)
    c = [[[Fraction(0)] * N for _ in range(N)] for _ in range(deriv + 1)]
    c[0][0][0] = Fraction(1)
    c1 = Fraction(1)
    for i in range(1, N):
        c2 = Fraction(1)
        for j in range(i):
            c3 = offsets[i] - offsets[j]
            c2 *= c3
            for k in range(min(i, deriv), -1, -1):
                prev = c[k - 1][i - 1][j] if k else Fraction(0)
                c[k][i][j] = (offsets[i] * c[k][i - 1][j] - k * prev) / c3
        for k in range(min(i, deriv), -1, -1):
            prev = c[k - 1][i - 1][i - 1] if k else Fraction(0)
            c[k][i][i] = c1 / c2 * (k * prev - offsets[i - 1] * c[k][i - 1][i - 1])
        c1 = c2
    return tuple(c[deriv][N - 1])


def fd_stencil(order: int, deriv: int) -> np.ndarray:
    """Central-difference weights on offsets -m..m (multiply by h**-deriv).

    >>> fd_stencil(2, 1)
    array([-0.5,  0. ,  0.5])
    """
    if order not in (2, 4, 6):
        raise UnsupportedOrder(f"finite-difference accuracy order must be 2, 4 or 6, got {order}")
    if deriv < 1:
        raise UnsupportedOrder(f"derivative order must be >= 1, got {deriv}")
    return np.array([float(w) for w in _stencil_exact(order, deriv)])


def _half_width(order: int, deriv: int) -> int:
    return (deriv + 1) // 2 - 1 + order // 2


def auto_stride(h: float, order: int, deriv: int) -> int:
    """Node stride for derivative ``deriv`` balancing truncation and rounding.

    Targets an effective step of 2 * eps**(1/(deriv + order)), the
    rounding/truncation balance for a unit parameter scale; never below the
    sample spacing.
    """
    h_opt = 2.0 * _EPS ** (1.0 / (deriv + order))
    return max(1, int(round(h_opt / h)))


class SampledCurve(CurveProvider):
    """Uniformly sampled curve with finite-difference derivatives.

    Derivatives are central differences at the sample nodes, then
    interpolated to arbitrary ``t`` by a local Lagrange polynomial through
    ``fd_order + 2`` nodes. ``stride`` widens the stencil of derivative d
    to step ``stride_d * h``; ``"auto"`` picks it per derivative order.
    The usable domain excludes the boundary margin the stencils need.
    """

    def __init__(self, points, h: float, t0: float = 0.0, fd_order: int = 4, max_order: int | None = None, stride="auto", domain=None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2:
            raise BadParams(f"points must be a 2-d array, got shape {pts.shape}")
        if not h > 0:
            raise BadParams(f"sample spacing must be positive, got {h}")
        if fd_order not in (2, 4, 6):
            raise UnsupportedOrder(f"finite-difference accuracy order must be 2, 4 or 6, got {fd_order}")
        if not np.all(np.isfinite(pts)):
            raise BadParams("sampled points contain non-finite values")
        self.points = pts
        self.n = pts.shape[1]
        self.h = float(h)
        self.t0 = float(t0)
        self.fd_order = fd_order
        self.max_order = 2 * self.n if max_order is None else int(max_order)
        N = pts.shape[0]
        if N < (self.n + 1) + fd_order + 2:
            raise InsufficientSamples(f"{N} samples; at least {(self.n + 1) + fd_order + 2} needed")
        self.strides = {
            d: (auto_stride(self.h, fd_order, d) if stride == "auto" else int(stride))
            for d in range(1, self.max_order + 1)
        }
        margin = self.margin_nodes(self.n, self.h, fd_order, self.max_order, stride)
        if N - 1 < 2 * margin + 1:
            raise InsufficientSamples(
                f"{N} samples do not fit stencils of half-width {margin} on both ends"
            )
        self.margin = margin
        self.domain = (self.t0 + margin * self.h, self.t0 + (N - 1 - margin) * self.h)
        if domain is not None:
            lo, hi = float(domain[0]), float(domain[1])
            slack = 1e-9 * self.h
            if lo < self.domain[0] - slack or hi > self.domain[1] + slack or not lo < hi:
                raise InsufficientSamples(
                    f"requested domain [{lo}, {hi}] is not inside the stencil-safe range {list(self.domain)}"
                )
            self.domain = (max(lo, self.domain[0]), min(hi, self.domain[1]))
        self._nodal = {0: pts}
        for d in range(1, self.max_order + 1):
            self._nodal[d] = self._nodal_derivative(d)

    @staticmethod
    def margin_nodes(n: int, h: float, fd_order: int = 4, max_order: int | None = None, stride="auto") -> int:
        """Number of boundary nodes excluded from the usable domain."""
        max_order = 2 * n if max_order is None else max_order
        widest = 0
        for d in range(1, max_order + 1):
            r = auto_stride(h, fd_order, d) if stride == "auto" else int(stride)
            widest = max(widest, _half_width(fd_order, d) * r)
        return widest + (fd_order + 2) // 2

    def _nodal_derivative(self, d):
        w = fd_stencil(self.fd_order, d)
        r = self.strides[d]
        m = (w.size - 1) // 2
        N = self.points.shape[0]
        out = np.full_like(self.points, np.nan)
        lo, hi = m * r, N - m * r
        acc = np.zeros((hi - lo, self.n))
        for j, wj in enumerate(w):
            if wj == 0.0:
                continue
            off = (j - m) * r
            acc += wj * self.points[lo + off: hi + off]
        out[lo:hi] = acc / (r * self.h) ** d
        return out

    def _derivatives(self, t, order):
        q = self.fd_order + 2
        x = (t - self.t0) / self.h
        base = np.floor(x).astype(int) - q // 2 + 1
        N = self.points.shape[0]
        base = np.clip(base, 0, N - q)
        nodes = base[:, None] + np.arange(q)[None, :]
        xs = nodes.astype(float)
        # Lagrange weights
        diff = x[:, None] - xs
        wts = np.ones((t.size, q))
        for j in range(q):
            for k in range(q):
                if k != j:
                    wts[:, j] *= diff[:, k] / (j - k)
        out = np.empty((t.size, order + 1, self.n))
        for d in range(order + 1):
            vals = self._nodal[d][nodes]  # (m, q, n)
            out[:, d] = np.einsum("mq,mqn->mn", wts, vals)
        if not np.all(np.isfinite(out)):
            raise InsufficientSamples("finite-difference stencil does not fit at requested t")
        return out

    def sample_times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.points.shape[0])


def sample_curve(c: CurveProvider, a: float, b: float, npts: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform grid and positions of ``c`` on [a, b]."""
    t = np.linspace(a, b, npts)
    return t, c.position(t)
