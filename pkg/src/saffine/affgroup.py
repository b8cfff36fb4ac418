"""The special affine group SL(n) x R^n and its action on curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numlin
from .curvekit import CurveProvider
from .errors import DimensionMismatch, NotUnimodular

UNIMODULAR_TOL = 1e-9


@dataclass(frozen=True)
class SpecialAffineMap:
    """x -> B x + tau with det B = 1."""

    B: np.ndarray
    tau: np.ndarray

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def __call__(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.B.T + self.tau

    def to_json(self) -> dict:
        return {"n": self.n, "B": self.B.tolist(), "tau": self.tau.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "SpecialAffineMap":
        B = np.asarray(doc["B"], dtype=float)
        tau = np.asarray(doc.get("tau", np.zeros(B.shape[0])), dtype=float)
        if "n" in doc and int(doc["n"]) != B.shape[0]:
            raise DimensionMismatch(f"map declares n = {doc['n']} but B is {B.shape}")
        return make_map(B, tau)


def make_map(B, tau=None) -> SpecialAffineMap:
    B = numlin.as_mat(B)
    if B.ndim != 2:
        raise DimensionMismatch("B must be a single square matrix")
    n = B.shape[0]
    tau = np.zeros(n) if tau is None else numlin.as_vec(tau)
    if tau.shape != (n,):
        raise DimensionMismatch(f"translation has shape {tau.shape}, expected ({n},)")
    d = numlin.det(B)
    if abs(d - 1.0) > UNIMODULAR_TOL:
        raise NotUnimodular(f"det B = {d:.12g}, expected 1")
    B.flags.writeable = False
    tau.flags.writeable = False
    return SpecialAffineMap(B=B, tau=tau)


def identity(n: int) -> SpecialAffineMap:
    return make_map(np.eye(n))


def translation(tau) -> SpecialAffineMap:
    tau = numlin.as_vec(tau)
    return make_map(np.eye(tau.size), tau)


def random_sl(n: int, seed: int | None = None) -> np.ndarray:
    """Random matrix with det 1 and entries in [-3, 3], deterministic per seed.

    Entries are drawn uniform in [-1, 1]; a negative determinant flips the
    first column; draws with |det| < 0.05 or that would leave [-3, 3] after
    scaling by det**(-1/n) are redrawn.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    rng = np.random.default_rng(seed)
    while True:
        M = rng.uniform(-1.0, 1.0, size=(n, n))
        d = numlin.det(M)
        if d < 0:
            M[:, 0] = -M[:, 0]
            d = -d
        if d < 0.05:
            continue
        M = M * d ** (-1.0 / n)
        if np.max(np.abs(M)) > 3.0:
            continue
        return M


def random_map(n: int, seed: int | None = None, tau_scale: float = 1.0) -> SpecialAffineMap:
    rng = np.random.default_rng(None if seed is None else seed + 7919)
    return make_map(random_sl(n, seed), rng.uniform(-tau_scale, tau_scale, n))


def compose(A1: SpecialAffineMap, A2: SpecialAffineMap) -> SpecialAffineMap:
    """A1 o A2."""
    if A1.n != A2.n:
        raise DimensionMismatch(f"cannot compose maps of dimension {A1.n} and {A2.n}")
    return make_map(A1.B @ A2.B, A1.B @ A2.tau + A1.tau)


def invert(A: SpecialAffineMap) -> SpecialAffineMap:
    Binv = numlin.inv(A.B)
    return make_map(Binv, -Binv @ A.tau)


class TransformedCurve(CurveProvider):
    """A o C: positions map through B then tau, derivatives through B only."""

    def __init__(self, A: SpecialAffineMap, c: CurveProvider):
        if A.n != c.n:
            raise DimensionMismatch(f"map acts on R^{A.n}, curve lives in R^{c.n}")
        self.A = A
        self.base = c
        self.n = c.n
        self.domain = c.domain
        self.max_order = c.max_order

    def _derivatives(self, t, order):
        d = self.base.derivatives(t, order) @ self.A.B.T
        d[:, 0] += self.A.tau
        return d


def apply(A: SpecialAffineMap, c: CurveProvider) -> TransformedCurve:
    return TransformedCurve(A, c)
