import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pbitrc.errors import DomainError
from pbitrc.metrics import classify, nmse, ser

ALPHA = (-3.0, -1.0, 1.0, 3.0)


def test_nmse_examples():
    d = np.array([1.0, 2.0, 3.0])
    assert nmse(d, d) == 0.0
    assert nmse(np.full(3, d.mean()), d) == pytest.approx(1.0)
    assert nmse([1, 2, 4], [1, 2, 3]) == pytest.approx(0.5)


def test_nmse_power_normalization():
    assert nmse([1, 2, 4], [1, 2, 3], normalization="power") == pytest.approx(1 / 14)


def test_nmse_errors():
    with pytest.raises(DomainError):
        nmse([1, 2], [3, 3])
    with pytest.raises(DomainError):
        nmse([1, 2, 3], [1, 2])
    with pytest.raises(DomainError):
        nmse([1], [1])
    with pytest.raises(DomainError):
        nmse([1, 2], [1, 2], normalization="other")


def test_nmse_joint_shift_invariance():
    rng = np.random.default_rng(0)
    d, y = rng.standard_normal(100), rng.standard_normal(100)
    assert nmse(y + 7.0, d + 7.0) == pytest.approx(nmse(y, d), rel=1e-12)
    assert nmse(y + 7.0, d) != pytest.approx(nmse(y, d), rel=1e-3)


def test_nmse_quadratic_in_perturbation():
    rng = np.random.default_rng(1)
    d, r = np.sin(np.arange(200) / 10.0), rng.standard_normal(200)
    eps = np.array([1e-1, 1e-2, 1e-3, 1e-4])
    vals = np.array([nmse(d + e * r, d) for e in eps])
    slope = np.polyfit(np.log(eps), np.log(vals), 1)[0]
    assert slope == pytest.approx(2.0, abs=1e-6)


def test_ser_examples():
    d = np.array([1.0, -3.0, 3.0, -1.0])
    assert ser(d, d, ALPHA) == 0.0
    assert ser(-d, d, ALPHA) == 1.0
    assert ser([0.4, -2.1, 2.9], [1, -3, 3], ALPHA) == 0.0
    assert ser([0.0], [1.0], ALPHA) == 1.0
    assert classify([0.0, 2.0, -2.0], ALPHA).tolist() == [1, 2, 0]


def test_ser_errors():
    with pytest.raises(DomainError):
        ser([1.0], [1.0], [])
    with pytest.raises(DomainError):
        ser([1.0, 2.0], [1.0], ALPHA)
    with pytest.raises(DomainError):
        ser([1.0], [2.0], ALPHA)


def _brute_nearest(y, alphabet):
    out = []
    for v in y:
        best = None
        for i, a in enumerate(alphabet):
            if best is None or abs(v - a) < abs(v - alphabet[best]):
                best = i
        out.append(best)
    return out


@settings(max_examples=60)
@given(
    alphabet=st.lists(st.integers(-20, 20), min_size=1, max_size=6, unique=True).map(sorted),
    y=st.lists(st.floats(-30, 30), min_size=1, max_size=30),
    scale=st.floats(0.1, 10.0),
    offset=st.floats(-5, 5),
)
def test_classification_matches_brute_force_under_relabeling(alphabet, y, scale, offset):
    a = np.array(alphabet, dtype=float)
    idx = classify(y, a)
    assert idx.tolist() == _brute_nearest(y, alphabet)
    # an increasing affine relabeling preserves nearest-symbol indices
    # (ties are measure-zero and the brute-force oracle keeps the first)
    idx2 = classify(np.array(y) * scale + offset, a * scale + offset)
    dist = np.abs(np.array(y)[:, None] - a[None, :])
    tied = np.sum(np.isclose(dist, dist.min(axis=1, keepdims=True), rtol=1e-9, atol=1e-9), axis=1) > 1
    assert np.array_equal(idx[~tied], idx2[~tied])
