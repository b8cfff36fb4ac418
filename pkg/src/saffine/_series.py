"""
Truncated power series arithmetic.

A series is an array whose axis 0 holds Taylor coefficients
``a[k] = f^(k)(x0) / k!``; trailing axes are batch (and, for vector-valued
series, component) axes. All routines keep the first ``K`` coefficients.
"""

import itertools
from math import factorial

import numpy as np


def mul(a: np.ndarray, b: np.ndarray, K: int) -> np.ndarray:
    """Cauchy product truncated to K terms; broadcasts trailing axes."""
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    out = np.zeros((K,) + shape)
    for k in range(K):
        for j in range(max(0, k - b.shape[0] + 1), min(k, a.shape[0] - 1) + 1):
            out[k] += a[j] * b[k - j]
    return out


def power(g: np.ndarray, p: float, K: int) -> np.ndarray:
    """g**p for a series with g[0] > 0 (J.C.P. Miller recurrence)."""
    f = np.zeros((K,) + g.shape[1:])
    f[0] = g[0] ** p
    for k in range(1, K):
        acc = np.zeros(g.shape[1:])
        for j in range(1, min(k, g.shape[0] - 1) + 1):
            acc += ((p + 1.0) * j - k) * g[j] * f[k - j]
        f[k] = acc / (k * g[0])
    return f


def integrate(a: np.ndarray, K: int) -> np.ndarray:
    """Antiderivative vanishing at the expansion point."""
    out = np.zeros((K,) + a.shape[1:])
    m = min(K - 1, a.shape[0])
    for k in range(m):
        out[k + 1] = a[k] / (k + 1)
    return out


def revert(s: np.ndarray, K: int) -> np.ndarray:
    """Compositional inverse u(v) of v = s(u), with s[0] = 0 and s[1] != 0."""
    u = np.zeros((K,) + s.shape[1:])
    if K < 2:
        return u
    u[1] = 1.0 / s[1]
    for k in range(2, K):
        # coefficient k of s(u) with u[k] still zero; s[1]*u[k] must cancel it
        c = compose_scalar(s, u, k + 1)[k]
        u[k] = -c / s[1]
    return u


def compose_scalar(c: np.ndarray, u: np.ndarray, K: int) -> np.ndarray:
    """sum_j c[j] * u**j for series u with u[0] = 0."""
    out = np.zeros((K,) + np.broadcast_shapes(c.shape[1:], u.shape[1:]))
    upow = np.zeros((K,) + u.shape[1:])
    upow[0] = 1.0
    for j in range(min(K, c.shape[0])):
        if j > 0:
            upow = mul(upow, u, K)
        out += c[j] * upow
    return out


def compose_vector(c: np.ndarray, u: np.ndarray, K: int) -> np.ndarray:
    """Vector series ``c`` (axis -1 = components) composed with scalar ``u``."""
    out = np.zeros((K,) + np.broadcast_shapes(c.shape[1:-1], u.shape[1:]) + c.shape[-1:])
    upow = np.zeros((K,) + u.shape[1:])
    upow[0] = 1.0
    for j in range(min(K, c.shape[0])):
        if j > 0:
            upow = mul(upow, u, K)
        out += c[j] * upow[..., None]
    return out


def det_series(cols: np.ndarray, K: int, det) -> np.ndarray:
    """Taylor coefficients of det(column_1(x), ..., column_n(x)).

    ``cols[i, j]`` (shape ``(n, J, ..., n)``) is coefficient j of column i.
    Uses multilinearity: coefficient m collects det(c_{1,j1}, ..., c_{n,jn})
    over all j1 + ... + jn = m.
    """
    n = cols.shape[0]
    J = cols.shape[1]
    out = np.zeros((K,) + cols.shape[2:-1])
    for m in range(K):
        for js in _compositions(m, n):
            if max(js) >= J:
                continue
            mat = np.stack([cols[i, js[i]] for i in range(n)], axis=-1)
            out[m] += det(mat)
    return out


def _compositions(m: int, n: int):
    """All n-tuples of non-negative integers summing to m."""
    for cuts in itertools.combinations(range(m + n - 1), n - 1):
        prev = -1
        parts = []
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(m + n - 1 - prev - 1)
        yield tuple(parts)


def to_derivatives(a: np.ndarray) -> np.ndarray:
    """Taylor coefficients -> derivative values."""
    scale = np.array([factorial(k) for k in range(a.shape[0])], dtype=float)
    return a * scale.reshape((-1,) + (1,) * (a.ndim - 1))


def from_derivatives(d: np.ndarray) -> np.ndarray:
    scale = np.array([1.0 / factorial(k) for k in range(d.shape[0])])
    return d * scale.reshape((-1,) + (1,) * (d.ndim - 1))
