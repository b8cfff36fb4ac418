"""Acceptance criteria, one test each. Every test records a PASS/FAIL line
that the terminal summary prints under "acceptance criteria"."""

import numpy as np
import sympy as sp

from conftest import ACCEPTANCE_RESULTS
from saffine import numlin
from saffine.affgroup import apply, random_map
from saffine.curvekit import PolynomialCurve, SampledCurve, eval_jet, jet_stack, make_catalog
from saffine.equivalence import check_equivalence
from saffine.invariants import (
    cramer_coeffs,
    frame_alpha,
    gram_det,
    invariant_profile,
    natural_curve,
    pullback,
)
from saffine.reconstruct import CurvatureSpec, integrate_frame, roundtrip

T = sp.Symbol("t")


def record(num, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}: {detail}"
    ACCEPTANCE_RESULTS.append(line)
    print(line)
    assert ok, line


def rel_dev(p, q):
    return np.max(np.abs(p.chi - q.chi)) / max(1.0, np.max(np.abs(p.chi)))


def test_01_invariance():
    cases = [(2, ("ellipse", [1, 2])), (2, ("moment", [2])), (3, ("moment", [3])), (3, ("helix", [1, 2, 0.5])),
             (4, ("moment", [4]))]
    worst = 0.0
    for n, curve in cases:
        c = make_catalog(*curve)
        base = invariant_profile(c, npts=501)
        for seed in range(25):
            worst = max(worst, rel_dev(base, invariant_profile(apply(random_map(n, seed), c), npts=501)))
    record(1, "invariance under 25 random maps per n", worst <= 1e-6, f"max relative deviation {worst:.2e} (<= 1e-6)")


def test_02_circle_curvature():
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        p = invariant_profile(make_catalog("circle", [r]), npts=501)
        worst = max(worst, np.max(np.abs(p.chi[:, 0] + r ** (-4 / 3))))
    record(2, "circle chi_1 = -r^(-4/3)", worst <= 1e-8, f"max error {worst:.2e} (<= 1e-8)")


def test_03_ellipse_curvature():
    worst = 0.0
    for a, b in ((1, 2), (1, 3), (2, 3)):
        p = invariant_profile(make_catalog("ellipse", [a, b]), npts=501)
        worst = max(worst, np.max(np.abs(p.chi[:, 0] + (a * b) ** (-2 / 3))))
    record(3, "ellipse chi_1 = -(ab)^(-2/3)", worst <= 1e-6, f"max error {worst:.2e} (<= 1e-6)")


def test_04_moment_curve_flat():
    worst = 0.0
    for n in (2, 3, 4, 5):
        worst = max(worst, np.max(np.abs(invariant_profile(make_catalog("moment", [n]), npts=501).chi)))
    record(4, "moment curves have chi = 0", worst <= 1e-9, f"max |chi| {worst:.2e} (<= 1e-9)")


def test_05_scaling_law(sympy_curve):
    sigma = T + sp.Rational(3, 10) * sp.sin(T)
    cases = {
        2: ("ellipse", [1, 2], [sp.cos(T), 2 * sp.sin(T)]),
        3: ("helix", [1, 2, 0.5], [sp.cos(T), 2 * sp.sin(T), T / 2]),
        4: ("moment", [4], [T, T**2, T**3, T**4]),
    }
    worst = 0.0
    for n, (name, params, exprs) in cases.items():
        ts = np.linspace(0.0, 0.9, 31)
        composed = sympy_curve([e.subs(T, sigma) for e in exprs], T, (0, 1))
        lhs = gram_det(jet_stack(composed, ts))
        base = make_catalog(name, params, domain=(-1, 3))
        rhs = (1 + 0.3 * np.cos(ts)) ** (n * (n + 1) // 2) * gram_det(jet_stack(base, ts + 0.3 * np.sin(ts)))
        worst = max(worst, np.max(np.abs(lhs / rhs - 1)))
    record(5, "det scales with sigma'^(n(n+1)/2)", worst <= 1e-7, f"max relative error {worst:.2e} (<= 1e-7)")


def test_06_natural_parameter():
    wobbly = PolynomialCurve([[0, 1, 0.3, -0.2], [0, 0.1, 1, 0.4], [0, 0, 0.2, 1, 0.3]], (0, 1))
    curves = [make_catalog("ellipse", [1, 2]), make_catalog("moment", [3]), make_catalog("helix", [1, 2, 0.5]),
              make_catalog("moment", [4]), wobbly]
    det_err = xn = 0.0
    for c in curves:
        nat = natural_curve(c)
        s = np.linspace(*nat.domain, 501)
        d = jet_stack(nat, s)
        det_err = max(det_err, np.max(np.abs(gram_det(d) - 1.0)))
        xn = max(xn, np.max(np.abs(cramer_coeffs(d)[:, -1])))
    ok = det_err <= 1e-6 and xn <= 1e-6
    record(6, "natural parameter contract", ok, f"max |det - 1| {det_err:.2e}, max |X_n| {xn:.2e} (<= 1e-6)")


def test_07_pullback_structure():
    h = 1e-5
    trace = fd_err = 0.0
    sub_exact = True
    for n in (2, 3):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            coeffs = 0.3 * rng.uniform(-1, 1, (n, 4))
            coeffs[np.arange(n), np.arange(1, n + 1)] += 1.0
            c = PolynomialCurve(coeffs, (-0.5, 0.5))
            for t in np.linspace(-0.3, 0.3, 5):
                pb = pullback(eval_jet(c, t))
                trace = max(trace, abs(pb.trace))
                sub_exact &= bool(np.all(np.diag(pb.matrix, -1) == 1.0))
                da = (frame_alpha(eval_jet(c, t + h)) - frame_alpha(eval_jet(c, t - h))) / (2 * h)
                fd = numlin.inv(frame_alpha(eval_jet(c, t))) @ da
                fd_err = max(fd_err, np.max(np.abs(pb.matrix - fd)))
    ok = trace <= 1e-9 and sub_exact and fd_err <= 1e-6
    record(7, "pullback structure", ok,
           f"max |trace| {trace:.2e} (<= 1e-9), subdiagonal exactly 1: {sub_exact}, FD mismatch {fd_err:.2e} (<= 1e-6)")


def test_08_equivalence_decision():
    map_err = 0.0
    accepted = True
    for curve, seed in ((("ellipse", [1, 2]), 0), (("ellipse", [1, 3]), 1), (("moment", [3]), 2),
                        (("helix", [1, 2, 0.5]), 3), (("moment", [4]), 4)):
        c = make_catalog(*curve)
        A = random_map(c.n, seed)
        rep = check_equivalence(c, apply(A, c))
        accepted &= rep.equivalent
        if rep.equivalent:
            map_err = max(map_err, np.max(np.abs(rep.map.B - A.B)), np.max(np.abs(rep.map.tau - A.tau)))
    r1 = check_equivalence(make_catalog("ellipse", [1, 2]), make_catalog("ellipse", [1, 3]))
    r2 = check_equivalence(make_catalog("circle", [1]), make_catalog("parabola"))
    dev = min(max(r1.deviations), max(r2.deviations))
    ok = accepted and map_err <= 1e-5 and not r1.equivalent and not r2.equivalent and dev >= 0.1
    record(8, "equivalence decision", ok,
           f"generated pairs accepted: {accepted}, map error {map_err:.2e} (<= 1e-5); "
           f"rejected pairs min deviation {dev:.3f} (>= 0.1)")


def test_09_reconstruction():
    spec = CurvatureSpec.constant([-1.0], 2 * np.pi)

    def closure(h):
        rc = integrate_frame(spec, p0=[1.0, 0.0], h=h)
        return np.max(np.abs(rc.p[-1] - rc.p[0])), np.max(rc.det_drift)

    close, drift = closure(1e-3)
    # at h = 1e-3 the closure sits at the rounding floor, so the order is measured on coarser steps
    ratio = closure(0.1)[0] / closure(0.05)[0]
    trips = [roundtrip(make_catalog(*c), tol=1e-4).equivalent for c in (("ellipse", [1, 2]), ("moment", [3]))]
    ok = close <= 1e-6 and 12.0 <= ratio <= 20.0 and drift <= 1e-8 and all(trips)
    record(9, "reconstruction", ok,
           f"closure {close:.2e} (<= 1e-6), halving ratio {ratio:.2f} (16 +- 25%), "
           f"max |det F - 1| {drift:.2e} (<= 1e-8), round trips pass: {all(trips)}")


def test_10_sampled_circle():
    h, pad = 1e-3, 0.05
    t = np.arange(-pad, 2 * np.pi + pad + h / 2, h)
    c = SampledCurve(np.column_stack([np.cos(t), np.sin(t)]), h, t0=t[0], fd_order=4)
    err = np.max(np.abs(invariant_profile(c, npts=501).chi[:, 0] + 1.0))
    record(10, "sampled circle through finite differences", err <= 1e-4, f"max error {err:.2e} (<= 1e-4)")
