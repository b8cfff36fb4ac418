"""
Curves from prescribed special affine curvatures.

The frame F = (C', ..., C^(n)) of a naturally parametrized curve obeys
F' = F K(s) with K the trace-free companion matrix carrying
(chi_1, ..., chi_{n-1}, 0) in its last column, and C' = F e_1. Integrating
this matrix ODE with classic RK4 reconstructs the curve up to the choice of
initial frame and point.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import numlin
from .curvekit import CurveProvider, eval_jet
from .errors import BadParams, DimensionMismatch, DriftExceeded, NotUnimodular, OutOfDomain

DRIFT_BUDGET = 1e-6
_TAYLOR_DEGREE = 8


class ConstChannel:
    kind = "const"

    def __init__(self, value: float):
        self.value = float(value)

    def taylor(self, s: np.ndarray, K: int) -> np.ndarray:
        out = np.zeros((K,) + s.shape)
        out[0] = self.value
        return out


class PolyChannel:
    """Polynomial in s, coefficients ascending."""

    kind = "poly"

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise BadParams("poly channel needs a non-empty coefficient list")

    def taylor(self, s, K):
        P = np.polynomial.polynomial
        out = np.zeros((K,) + s.shape)
        c = self.coeffs
        for k in range(min(K, c.size)):
            out[k] = P.polyval(s, c) / math.factorial(k)
            c = P.polyder(c)
        return out


class TableChannel:
    """Sampled curvature values joined by a monotone-safe cubic interpolant."""

    kind = "table"

    def __init__(self, s, values):
        self.s = np.asarray(s, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.s.shape != self.values.shape or self.s.size < 2:
            raise BadParams("table channel needs matching s and value arrays with at least 2 points")
        if not np.all(np.diff(self.s) > 0):
            raise BadParams("table channel abscissae must increase strictly")
        self._interp = PchipInterpolator(self.s, self.values, extrapolate=True)

    def taylor(self, s, K):
        out = np.zeros((K,) + s.shape)
        for k in range(min(K, 4)):
            out[k] = self._interp(s, nu=k) / math.factorial(k)
        return out


def channel_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "const":
        return ConstChannel(doc["value"])
    if kind == "poly":
        return PolyChannel(doc["coeffs"])
    if kind == "table":
        return TableChannel(doc["s"], doc["values"])
    raise BadParams(f"unknown channel kind {kind!r}")


class CurvatureSpec:
    """n - 1 curvature functions on [0, L]."""

    def __init__(self, n: int, length: float, channels):
        if n < 2:
            raise BadParams(f"n must be >= 2, got {n}")
        if len(channels) != n - 1:
            raise DimensionMismatch(f"n = {n} needs {n - 1} curvature channels, got {len(channels)}")
        if not length > 0:
            raise BadParams(f"length must be positive, got {length}")
        self.n = int(n)
        self.length = float(length)
        self.channels = list(channels)

    @classmethod
    def from_json(cls, doc: dict) -> "CurvatureSpec":
        return cls(int(doc["n"]), float(doc["L"]), [channel_from_json(c) for c in doc["channels"]])

    @classmethod
    def constant(cls, values, length: float) -> "CurvatureSpec":
        return cls(len(values) + 1, length, [ConstChannel(v) for v in values])

    def _check(self, s):
        slack = 1e-9 * max(1.0, self.length)
        if np.any((s < -slack) | (s > self.length + slack)):
            raise OutOfDomain(f"s outside [0, {self.length}]")

    def taylor(self, s, K: int) -> np.ndarray:
        """Taylor coefficients of chi at s: shape (K, len(s), n - 1)."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.stack([ch.taylor(s, K) for ch in self.channels], axis=-1)

    def values(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        self._check(s)
        return self.taylor(s, 1)[0]


def _assemble(chi: np.ndarray, n: int) -> np.ndarray:
    """Companion matrices for a batch of curvature rows (..., n - 1)."""
    K = np.zeros(chi.shape[:-1] + (n, n))
    idx = np.arange(n - 1)
    K[..., idx + 1, idx] = 1.0
    K[..., : n - 1, n - 1] = chi
    return K


def frame_ode_matrix(spec: CurvatureSpec, s: float) -> np.ndarray:
    """K(s): ones on the subdiagonal, last column (chi_1, ..., chi_{n-1}, 0)."""
    return _assemble(spec.values([s])[0], spec.n)


def _taylor_frames(spec: CurvatureSpec, s: np.ndarray, K: int) -> np.ndarray:
    """Series Phi of the fundamental solution Phi' = Phi K, Phi(s) = I."""
    n = spec.n
    Kser = _assemble(spec.taylor(s, K), n)  # (K, m, n, n)
    idx = np.arange(n - 1)
    Kser[1:, ..., idx + 1, idx] = 0.0  # the unit subdiagonal is constant in s
    Phi = np.zeros((K,) + s.shape + (n, n))
    Phi[0] = np.eye(n)
    for m in range(K - 1):
        acc = np.zeros(s.shape + (n, n))
        for j in range(m + 1):
            acc += Phi[j] @ Kser[m - j]
        Phi[m + 1] = acc / (m + 1)
    return Phi


@dataclass(frozen=True)
class FrameState:
    s: float
    F: np.ndarray
    p: np.ndarray

    @property
    def drift(self) -> float:
        return abs(numlin.det(self.F) - 1.0)


class ReconstructedCurve(CurveProvider):
    """Tabulated RK4 solution of the frame ODE.

    Between nodes the solution is continued by the Taylor series of the ODE
    itself from the nearest node; derivative k of the curve is read from the
    frame (column k for k <= n, frame times series beyond).
    """

    def __init__(self, spec: CurvatureSpec, s: np.ndarray, F: np.ndarray, p: np.ndarray):
        self.spec = spec
        self.s = s
        self.F = F
        self.p = p
        self.n = spec.n
        self.domain = (0.0, spec.length)
        self.max_order = 24
        self.h = float(s[1] - s[0])

    @property
    def det_drift(self) -> np.ndarray:
        return np.abs(numlin.det(self.F) - 1.0)

    def state(self, k: int) -> FrameState:
        return FrameState(float(self.s[k]), self.F[k], self.p[k])

    def _continue(self, s):
        k = np.clip(np.rint(s / self.h).astype(int), 0, self.s.size - 1)
        u = s - self.s[k]
        Phi = _taylor_frames(self.spec, self.s[k], _TAYLOR_DEGREE + 1)
        upow = u[None, :] ** np.arange(_TAYLOR_DEGREE + 1)[:, None]
        Fs = self.F[k] @ np.einsum("km,kmij->mij", upow, Phi)
        ipow = u[None, :] ** np.arange(1, _TAYLOR_DEGREE + 2)[:, None] / np.arange(1, _TAYLOR_DEGREE + 2)[:, None]
        ps = self.p[k] + np.einsum("mij,mj->mi", self.F[k], np.einsum("km,kmi->mi", ipow, Phi[..., :, 0]))
        return Fs, ps

    def _derivatives(self, s, order):
        Fs, ps = self._continue(s)
        out = np.empty((s.size, order + 1, self.n))
        out[:, 0] = ps
        if order == 0:
            return out
        Psi = _taylor_frames(self.spec, s, order)
        for j in range(order):
            out[:, j + 1] = math.factorial(j) * np.einsum("mij,mj->mi", Fs, Psi[j][..., :, 0])
        return out

    def trace_csv(self, fh):
        n = self.n
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["s"] + [f"p_{i}" for i in range(1, n + 1)]
            + [f"F_{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)] + ["det_drift"]
        )
        drift = self.det_drift
        for k in range(self.s.size):
            w.writerow(
                [f"{self.s[k]:.17g}"] + [f"{v:.17g}" for v in self.p[k]]
                + [f"{v:.17g}" for v in self.F[k].ravel()] + [f"{drift[k]:.17g}"]
            )


def integrate_frame(spec: CurvatureSpec, F0=None, p0=None, h: float = 1e-3, drift_budget: float = DRIFT_BUDGET) -> ReconstructedCurve:
    """Classic RK4 for F' = F K(s), p' = F e_1 on [0, L].

    The step is shrunk to L / ceil(L / h) so the last node lands on L.
    Raises DriftExceeded as soon as |det F - 1| leaves the budget.
    """
    n = spec.n
    F0 = np.eye(n) if F0 is None else numlin.as_mat(F0)
    p0 = np.zeros(n) if p0 is None else numlin.as_vec(p0)
    if F0.shape != (n, n) or p0.shape != (n,):
        raise DimensionMismatch(f"initial frame/point must be {n}x{n} and {n}, got {F0.shape}, {p0.shape}")
    if abs(numlin.det(F0) - 1.0) > 1e-9:
        raise NotUnimodular(f"initial frame has det {numlin.det(F0):.12g}")
    if not h > 0:
        raise BadParams(f"step must be positive, got {h}")
    N = max(1, math.ceil(spec.length / h - 1e-9))
    step = spec.length / N
    s = np.linspace(0.0, spec.length, N + 1)
    mid = s[:-1] + 0.5 * step
    Kn = _assemble(spec.values(s), n)
    Km = _assemble(spec.values(mid), n)
    F = np.empty((N + 1, n, n))
    p = np.empty((N + 1, n))
    F[0], p[0] = F0, p0
    Fk, pk = F0.copy(), p0.copy()
    for k in range(N):
        k1 = Fk @ Kn[k]
        F2 = Fk + 0.5 * step * k1
        k2 = F2 @ Km[k]
        F3 = Fk + 0.5 * step * k2
        k3 = F3 @ Km[k]
        F4 = Fk + step * k3
        k4 = F4 @ Kn[k + 1]
        pk = pk + step / 6.0 * (Fk[:, 0] + 2.0 * F2[:, 0] + 2.0 * F3[:, 0] + F4[:, 0])
        Fk = Fk + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(Fk)):
            raise DriftExceeded(f"frame diverged at s = {s[k + 1]:.6g}", s=float(s[k + 1]), drift=math.inf)
        drift = abs(numlin.det(Fk) - 1.0)
        if drift > drift_budget:
            raise DriftExceeded(
                f"|det F - 1| = {drift:.3e} at s = {s[k + 1]:.6g} exceeds {drift_budget:g}; reduce the step",
                s=float(s[k + 1]),
                drift=drift,
            )
        F[k + 1], p[k + 1] = Fk, pk
    return ReconstructedCurve(spec, s, F, p)


def spec_from_profile(profile) -> CurvatureSpec:
    return CurvatureSpec(
        profile.n, profile.length, [TableChannel(profile.s, profile.chi[:, i]) for i in range(profile.n - 1)]
    )


def roundtrip(c: CurveProvider, npts: int = 501, h: float = 1e-3, tol: float = 1e-4, quad_npts: int = 2001):
    """profile -> reconstruct -> check_equivalence against the original."""
    from .equivalence import check_equivalence
    from .invariants import frame_alpha, natural_curve, profile_of_natural

    nat = natural_curve(c, quad_npts)
    profile = profile_of_natural(nat, npts)
    spec = spec_from_profile(profile)
    j0 = eval_jet(nat, 0.0)
    recon = integrate_frame(spec, frame_alpha(j0), j0.position, h)
    return check_equivalence(c, recon, npts=npts, tol=tol, quad_npts=quad_npts)
