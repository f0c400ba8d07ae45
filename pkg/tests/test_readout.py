import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import ridge_pinv
from pbitrc.errors import DomainError
from pbitrc.readout import ReadoutWeights, RidgeConfig, default_lambda, predict, ridge_fit
from pbitrc.reservoir import FeatureLayout


def test_identity_fit():
    r = ridge_fit(np.eye(3), np.eye(3), lam=0.0)
    assert np.allclose(r.W_out, np.eye(3), atol=1e-14)


def test_scalar_exact():
    x = np.array([[1.0], [2.0], [3.0]])
    assert ridge_fit(x, 2 * x[:, 0], lam=0.0).W_out[0, 0] == pytest.approx(2.0, rel=1e-14)


def test_scalar_ridge_closed_form():
    x = np.array([[1.0], [2.0], [3.0]])
    assert ridge_fit(x, 2 * x[:, 0], lam=1.0).W_out[0, 0] == pytest.approx(28 / 15, rel=1e-14)


def test_huge_lambda_shrinks_to_zero():
    rng = np.random.default_rng(0)
    X, Y = rng.uniform(-1, 1, (50, 6)), rng.uniform(-1, 1, (50, 2))
    r = ridge_fit(X, Y, lam=1e12)
    assert np.linalg.norm(r.W_out) <= np.linalg.norm(X.T @ Y) / 1e12 * (1 + 1e-6)


def test_rank_deficient_escalates_jitter():
    X = np.ones((10, 3))
    r = ridge_fit(X, np.ones(10), lam=0.0)
    assert r.lam > 0
    assert np.all(np.isfinite(r.W_out))


def test_default_lambda_is_scale_aware():
    X = np.random.default_rng(1).uniform(-1, 1, (40, 5))
    assert default_lambda(X) == pytest.approx(1e-6 * np.trace(X.T @ X) / 5)
    assert ridge_fit(X, X[:, 0]).lam == pytest.approx(default_lambda(X))


@pytest.mark.parametrize("seed", range(10))
def test_matches_pinv_oracle(seed):
    rng = np.random.default_rng(seed)
    T, F = rng.integers(5, 51), rng.integers(1, 11)
    X, Y = rng.standard_normal((T, F)), rng.standard_normal((T, 2))
    lam = float(rng.uniform(0.01, 2.0))
    W = ridge_fit(X, Y, lam).W_out
    ref = ridge_pinv(X, Y, lam)
    assert np.linalg.norm(W - ref) <= 1e-8 * np.linalg.norm(ref)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), lam=st.floats(0.0, 10.0))
def test_normal_equation_residual(seed, lam):
    rng = np.random.default_rng(seed)
    X, Y = rng.standard_normal((60, 8)), rng.standard_normal((60, 3))
    r = ridge_fit(X, Y, lam)
    res = (X.T @ X + r.lam * np.eye(8)) @ r.W_out.T - X.T @ Y
    assert np.linalg.norm(res) <= 1e-8 * np.linalg.norm(X.T @ Y)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), l1=st.floats(0.0, 5.0), dl=st.floats(1e-3, 5.0))
def test_monotone_shrinkage(seed, l1, dl):
    rng = np.random.default_rng(seed)
    X, Y = rng.standard_normal((30, 6)), rng.standard_normal((30, 1))
    n1 = np.linalg.norm(ridge_fit(X, Y, l1).W_out)
    n2 = np.linalg.norm(ridge_fit(X, Y, l1 + dl).W_out)
    assert n2 <= n1 * (1 + 1e-12)


def test_exact_recovery():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((40, 7))
    W = rng.standard_normal((2, 7))
    r = ridge_fit(X, X @ W.T, lam=0.0)
    assert np.linalg.norm(r.W_out - W) <= 1e-8 * np.linalg.norm(W)


def test_fit_errors():
    with pytest.raises(DomainError):
        ridge_fit(np.ones((3, 2)), np.ones(4))
    with pytest.raises(DomainError):
        ridge_fit(np.array([[np.nan]]), np.ones(1))
    with pytest.raises(DomainError):
        ridge_fit(np.ones((3, 2)), np.ones(3), layout=FeatureLayout(True, 5, 1))
    with pytest.raises(DomainError):
        RidgeConfig(lam=-1.0)


def test_predict_basics():
    W0 = ReadoutWeights(np.zeros((1, 4)), FeatureLayout(False, 4, 0))
    assert np.all(predict(W0, np.ones((5, 4))) == 0)
    I = ReadoutWeights(np.eye(4), FeatureLayout(False, 4, 0))
    f = np.arange(4.0)
    assert np.array_equal(predict(I, f), f)
    with pytest.raises(DomainError):
        predict(I, np.ones(3))


@given(
    a=arrays(np.float64, 6, elements=st.floats(-1e3, 1e3)),
    b=arrays(np.float64, 6, elements=st.floats(-1e3, 1e3)),
)
def test_predict_additive(a, b):
    W = ReadoutWeights(np.random.default_rng(0).standard_normal((2, 6)), FeatureLayout(False, 6, 0))
    lhs = predict(W, a + b)
    rhs = predict(W, a) + predict(W, b)
    scale = np.abs(W.W_out) @ (np.abs(a) + np.abs(b)) + 1e-300
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale)
