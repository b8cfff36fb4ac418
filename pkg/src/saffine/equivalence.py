"""
Special affine equivalence of curves.

Two regular curves are compared through their curvature profiles in the
natural parameter, both anchored at the start of their own domain. When the
profiles agree, the witnessing map is read off the unimodular frames at the
midpoint and checked on positions along the whole curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numlin
from .affgroup import SpecialAffineMap, apply, make_map
from .curvekit import CurveProvider, eval_jet
from .errors import DimensionMismatch, GridMismatch
from .invariants import NATURAL_TOL, InvariantProfile, frame_alpha, natural_curve, profile_of_natural


@dataclass
class EquivalenceReport:
    equivalent: bool
    deviations: list[float]
    tol: float
    map: SpecialAffineMap | None
    residual: float | None
    lengths: tuple[float, float]

    def to_json(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "deviations": [float(d) for d in self.deviations],
            "map": None if self.map is None else self.map.to_json(),
            "residual": None if self.residual is None else float(self.residual),
            "tol": self.tol,
            "lengths": [float(x) for x in self.lengths],
        }


def compare_profiles(p1: InvariantProfile, p2: InvariantProfile, tol: float) -> tuple[bool, np.ndarray]:
    """Channel-wise sup distance, passing when each is <= tol * (1 + max|chi_i|).

    Profiles whose total lengths differ by more than tol (relative to
    1 + L) never pass.
    """
    if p1.n != p2.n:
        raise DimensionMismatch(f"profiles live in R^{p1.n} and R^{p2.n}")
    if p1.s.size != p2.s.size:
        raise GridMismatch(f"profiles have {p1.s.size} and {p2.s.size} grid points")
    dev = np.max(np.abs(p1.chi - p2.chi), axis=0)
    scale = 1.0 + np.maximum(np.max(np.abs(p1.chi), axis=0), np.max(np.abs(p2.chi), axis=0))
    same_length = abs(p1.length - p2.length) <= tol * (1.0 + max(p1.length, p2.length))
    return bool(same_length and np.all(dev <= tol * scale)), dev


def recover_map(c1: CurveProvider, c2: CurveProvider, s0: float) -> SpecialAffineMap:
    """Map taking c1 onto c2 by matching unimodular frames and points at s0.

    Both curves must already be in their natural parameter.
    """
    if c1.n != c2.n:
        raise DimensionMismatch(f"curves live in R^{c1.n} and R^{c2.n}")
    j1, j2 = eval_jet(c1, s0), eval_jet(c2, s0)
    a1, a2 = frame_alpha(j1), frame_alpha(j2)
    B = a2 @ numlin.inv(a1)
    B = B * numlin.det(B) ** (-1.0 / c1.n)
    tau = j2.position - B @ j1.position
    return make_map(B, tau)


def verify_map(A: SpecialAffineMap, c1: CurveProvider, c2: CurveProvider, grid) -> float:
    """max over grid of |A(c1) - c2|_inf / (1 + |c2|_inf)."""
    if not (A.n == c1.n == c2.n):
        raise DimensionMismatch("map and curves must share the ambient dimension")
    grid = np.asarray(grid, dtype=float)
    p1 = apply(A, c1).position(grid)
    p2 = c2.position(grid)
    err = np.max(np.abs(p1 - p2), axis=1) / (1.0 + np.max(np.abs(p2), axis=1))
    return float(np.max(err))


def check_equivalence(
    c1: CurveProvider,
    c2: CurveProvider,
    npts: int = 501,
    tol: float = 1e-5,
    quad_npts: int = 2001,
    natural_tol: float = NATURAL_TOL,
) -> EquivalenceReport:
    if c1.n != c2.n:
        raise DimensionMismatch(f"curves live in R^{c1.n} and R^{c2.n}")
    nat1, nat2 = natural_curve(c1, quad_npts), natural_curve(c2, quad_npts)
    p1 = profile_of_natural(nat1, npts, tol=natural_tol)
    p2 = profile_of_natural(nat2, npts, tol=natural_tol)
    same, dev = compare_profiles(p1, p2, tol)
    lengths = (p1.length, p2.length)
    if not same:
        return EquivalenceReport(False, dev.tolist(), tol, None, None, lengths)
    A = recover_map(nat1, nat2, 0.5 * p1.length)
    grid = np.linspace(0.0, min(lengths), npts)
    residual = verify_map(A, nat1, nat2, grid)
    ok = residual <= tol
    return EquivalenceReport(ok, dev.tolist(), tol, A if ok else None, residual, lengths)
