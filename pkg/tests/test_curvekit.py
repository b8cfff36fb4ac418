from math import factorial

import numpy as np
import pytest

from saffine.curvekit import PolynomialCurve, SampledCurve, eval_jet, fd_stencil, make_catalog
from saffine.errors import BadParams, InsufficientSamples, OutOfDomain, UnknownCatalogName, UnsupportedOrder


def circle_samples(h, lo=0.0, hi=2 * np.pi, r=1.0):
    t = np.arange(lo, hi + h / 2, h)
    return t, r * np.c_[np.cos(t), np.sin(t)]


def test_moment3_jet_at_zero():
    j = eval_jet(make_catalog("moment", [3]), 0.0)
    np.testing.assert_array_equal(j.derivs, [[1, 0, 0], [0, 2, 0], [0, 0, 6], [0, 0, 0]])
    np.testing.assert_array_equal(j.position, [0, 0, 0])


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (0.5, 3.0)])
def test_ellipse_jet_at_zero(a, b):
    j = eval_jet(make_catalog("ellipse", [a, b]), 0.0)
    np.testing.assert_allclose(j.derivs, [[0, b], [-a, 0], [0, -b]], atol=1e-15)


def test_moment_factorial_pattern():
    for n in range(2, 7):
        c = make_catalog("moment", [n])
        for t in (0.0, 0.3, 1.0):
            j = eval_jet(c, t)
            for k in range(1, n + 1):
                # component k of C^(k) is k!, components below k vanish
                assert j.derivs[k - 1, k - 1] == factorial(k)
                assert np.all(j.derivs[k - 1, : k - 1] == 0)
            assert np.all(j.derivs[n] == 0)


def test_catalog_contracts():
    c = make_catalog("circle", [1])
    assert c.domain == (0.0, 2 * np.pi)
    np.testing.assert_allclose(c.position([0.0, np.pi / 2]), [[1, 0], [0, 1]], atol=1e-15)
    m4 = make_catalog("moment", [4])
    assert m4.domain == (0.0, 1.0)
    d = m4.derivatives([0.5], 5)[0]
    np.testing.assert_array_equal(d[4], [0, 0, 0, 24])
    np.testing.assert_array_equal(d[5], [0, 0, 0, 0])
    h = make_catalog("helix", [1, 2, 0.5])
    np.testing.assert_allclose(h.position([np.pi / 2]), [[0, 2, np.pi / 4]], atol=1e-15)


def test_catalog_errors():
    with pytest.raises(BadParams):
        make_catalog("ellipse", [2, 0])
    with pytest.raises(BadParams):
        make_catalog("circle", [-1])
    with pytest.raises(BadParams):
        make_catalog("moment", [1])
    with pytest.raises(BadParams):
        make_catalog("ellipse", [1])
    with pytest.raises(UnknownCatalogName):
        make_catalog("cardioid", [1])


def test_out_of_domain():
    with pytest.raises(OutOfDomain):
        eval_jet(make_catalog("moment", [3]), 1.5)


def test_polynomial_matches_hand_derivatives():
    c = PolynomialCurve([[1, 2, 3], [0, 0, 0, 4]], domain=(-1, 1))
    d = c.derivatives([0.5], 4)[0]
    np.testing.assert_allclose(d[:, 0], [1 + 1 + 0.75, 2 + 3, 6, 0, 0])
    np.testing.assert_allclose(d[:, 1], [0.5, 3.0, 12.0, 24.0, 0])


def test_stencil_classics():
    np.testing.assert_array_equal(fd_stencil(2, 1), [-0.5, 0, 0.5])
    np.testing.assert_array_equal(fd_stencil(2, 2), [1, -2, 1])
    np.testing.assert_allclose(fd_stencil(4, 1), [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12])
    for order in (2, 4, 6):
        for d in range(1, 7):
            assert abs(np.sum(fd_stencil(order, d))) < 1e-12


@pytest.mark.parametrize("h", [0.1, 0.05, 0.01])
def test_stencil_order4_third_derivative_of_t5(h):
    w = fd_stencil(4, 3)
    m = (w.size - 1) // 2
    x = 1.0 + h * np.arange(-m, m + 1)
    approx = np.dot(w, x**5) / h**3
    # exact for polynomials of degree <= 6, so only rounding remains
    assert abs(approx - 60.0) <= 1e-9 * h**-3


def test_stencil_exact_on_polynomials():
    for order in (2, 4, 6):
        for d in range(1, 6):
            w = fd_stencil(order, d)
            m = (w.size - 1) // 2
            x = np.arange(-m, m + 1, dtype=float)
            for deg in range(d + order):
                exact = factorial(deg) if deg == d else 0.0
                assert np.dot(w, x**deg) == pytest.approx(exact, abs=1e-9 * max(1, m**deg))


def test_stencil_errors():
    with pytest.raises(UnsupportedOrder):
        fd_stencil(3, 1)
    with pytest.raises(UnsupportedOrder):
        fd_stencil(4, 0)


def test_sampled_circle_first_derivative():
    h = 1e-3
    t, pts = circle_samples(h)
    sc = SampledCurve(pts, h, fd_order=4)
    exact = make_catalog("circle", [1])
    ts = np.linspace(*sc.domain, 1001)
    err = np.abs(sc.derivatives(ts, 1)[:, 1] - exact.derivatives(ts, 1)[:, 1]).max()
    assert err <= 1e-8


def test_sampled_nodes_reproduce_positions():
    h = 0.01
    t, pts = circle_samples(h)
    sc = SampledCurve(pts, h)
    k = np.arange(sc.margin, t.size - sc.margin, 37)
    np.testing.assert_allclose(sc.position(t[k]), pts[k], atol=1e-13)


@pytest.mark.parametrize("fd_order", [2, 4, 6])
def test_fd_convergence_rate(fd_order):
    exact = make_catalog("circle", [1])
    errs = []
    hs = [0.1, 0.05] if fd_order < 6 else [0.2, 0.1]
    for h in hs:
        t, pts = circle_samples(h, -1.0, 4.0)
        sc = SampledCurve(pts, h, t0=-1.0, fd_order=fd_order, stride=1, max_order=3)
        tn = t[(t > 1.0 - 1e-9) & (t < 2.0 + 1e-9)]
        errs.append(np.abs(sc.derivatives(tn, 3)[:, 1:] - exact.derivatives(tn, 3)[:, 1:]).max())
    slope = np.log2(errs[0] / errs[1])
    assert abs(slope - fd_order) <= 0.15 * fd_order


def test_sampled_errors():
    with pytest.raises(InsufficientSamples):
        SampledCurve(np.zeros((5, 2)), 0.1)
    with pytest.raises(BadParams):
        SampledCurve(np.zeros((50, 2)), 0.0)
    with pytest.raises(UnsupportedOrder):
        SampledCurve(np.zeros((50, 2)), 0.1, fd_order=3)
    t, pts = circle_samples(0.01)
    sc = SampledCurve(pts, 0.01)
    with pytest.raises(OutOfDomain):
        sc.derivatives([0.0])
    with pytest.raises(UnsupportedOrder):
        sc.derivatives([1.0], 2 * sc.n + 1)


def test_jet_invariants():
    j = eval_jet(make_catalog("ellipse", [1, 2]), 0.7)
    assert j.derivs.shape == (3, 2)
    np.testing.assert_array_equal(j.frame[:, 0], j.derivs[0])
    with pytest.raises(ValueError):
        type(j)(n=2, t=0.0, derivs=np.zeros((2, 2)))


def test_evaluation_is_deterministic():
    t, pts = circle_samples(0.01)
    sc = SampledCurve(pts, 0.01)
    ts = np.linspace(*sc.domain, 77)
    assert np.array_equal(sc.derivatives(ts, 4), sc.derivatives(ts, 4))
