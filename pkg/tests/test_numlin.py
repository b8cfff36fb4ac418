import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from saffine import numlin
from saffine.errors import SingularMatrix


def cramer_oracle(m, b):
    m = np.asarray(m, dtype=float)
    d = np.linalg.det(m)
    out = []
    for i in range(m.shape[0]):
        mi = m.copy()
        mi[:, i] = b
        out.append(np.linalg.det(mi) / d)
    return np.array(out)


def perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def test_det_examples():
    assert numlin.det(np.eye(3)) == 1.0
    assert numlin.det(np.diag([2.0, 3.0])) == 6.0
    assert numlin.det([[1.0, 1.0], [1.0, 1.0]]) == 0.0


def test_det_exact_on_triangular():
    u = np.triu(np.arange(1.0, 17.0).reshape(4, 4))
    assert numlin.det(u) == np.prod(np.diag(u))
    assert numlin.det(-np.eye(3)) == -1.0


def test_solve_examples():
    np.testing.assert_array_equal(numlin.solve(np.eye(3), [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])
    m, b = [[1.0, 0.0], [2.0, 2.0]], [1.0, 4.0]
    np.testing.assert_allclose(numlin.solve(m, b), cramer_oracle(m, b), atol=1e-14)
    np.testing.assert_allclose(numlin.solve(m, b), [1.0, 1.0], atol=1e-14)
    with pytest.raises(SingularMatrix):
        numlin.solve([[1.0, 1.0], [1.0, 1.0]], [1.0, 0.0])


def test_singularity_threshold_scales_with_norm():
    m = 1e8 * np.array([[2.0, 1.0], [1.0, 3.0]])
    np.testing.assert_allclose(m @ numlin.solve(m, [1.0, 1.0]), [1.0, 1.0])
    nearly = np.array([[1e8, 1e8], [1e8, 1e8 + 1e-6]])
    with pytest.raises(SingularMatrix):
        numlin.solve(nearly, [1.0, 0.0])


def test_inv_examples():
    np.testing.assert_array_equal(numlin.inv(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(numlin.inv(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
    with pytest.raises(SingularMatrix):
        numlin.inv(np.ones((3, 3)))


def test_batched_matches_loop():
    rng = np.random.default_rng(3)
    ms = rng.uniform(-1, 1, size=(20, 4, 4))
    d = numlin.det(ms)
    for k in range(20):
        assert d[k] == pytest.approx(numlin.det(ms[k]), rel=1e-12)
    x = numlin.solve(ms, np.ones(4))
    np.testing.assert_allclose(np.einsum("kij,kj->ki", ms, x), 1.0, atol=1e-10)


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        numlin.det([[np.nan, 0.0], [0.0, 1.0]])


square = st.integers(1, 6).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-1, 1, allow_nan=False, allow_subnormal=False))
)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    arrays(np.float64, (n, n), elements=st.floats(-1, 1, allow_subnormal=False)),
    arrays(np.float64, (n, n), elements=st.floats(-1, 1, allow_subnormal=False)),
)))
def test_det_multiplicative(pair):
    a, b = pair
    lhs = numlin.det(numlin.matmul(a, b))
    rhs = numlin.det(a) * numlin.det(b)
    scale = max(1.0, abs(rhs)) * 1e-9
    assert abs(lhs - rhs) <= max(scale, 1e-9 * np.prod(np.abs(a).sum(1).clip(1)) * np.prod(np.abs(b).sum(1).clip(1)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_det_column_permutations(n):
    rng = np.random.default_rng(n)
    m = rng.uniform(-1, 1, size=(n, n))
    d = numlin.det(m)
    for p in itertools.permutations(range(n)):
        assert numlin.det(m[:, p]) == pytest.approx(perm_sign(p) * d, rel=1e-12, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(square, st.integers(0, 2**31))
def test_solve_residual(m, seed):
    n = m.shape[0]
    m = m + 2.0 * n * np.eye(n)  # diagonally dominant, well conditioned
    b = np.random.default_rng(seed).uniform(-1, 1, n)
    x = numlin.solve(m, b)
    assert np.max(np.abs(m @ x - b)) <= 1e-10 * max(np.max(np.abs(b)), 1e-300) + 1e-300


def test_inverse_property_random():
    rng = np.random.default_rng(11)
    for n in range(2, 7):
        b = rng.uniform(-1, 1, (n, n)) + n * np.eye(n)
        np.testing.assert_allclose(numlin.matmul(b, numlin.inv(b)), np.eye(n), atol=1e-10)
