import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import pair_chain_correlation, pair_chain_sigma
from pbitrc.errors import DomainError
from pbitrc.pbit import NodeKind, PBitParams, node_step, pbit_sample, pbit_sample_many, spin_from_uniform
from pbitrc.rng import RngStream, uniform_pm1
from pbitrc.experiments import simulate_pair

STOCH = PBitParams(0.3, 0.3, NodeKind.STOCHASTIC)
SAMPLES = 100_000


def test_unbiased_at_zero_input():
    m = pbit_sample_many(0.0, 11, 0, np.arange(SAMPLES))
    assert abs(m.mean()) <= 3 / np.sqrt(SAMPLES)


def test_saturated_input_is_up():
    # P(-1) = (1 - tanh 10)/2 ~ 2e-9, so 10^4 draws are all +1 in practice
    m = pbit_sample_many(10.0, 5, np.arange(10_000), 7)
    assert np.all(m == 1.0)
    # tanh(10) = 1 - 4.1e-9 sits below 1 - 2**-32: only the extreme tail flips
    assert spin_from_uniform(-1.0, 10.0) == -1.0
    assert spin_from_uniform(-1.0 + 1e-8, 10.0) == 1.0


def test_probability_at_half():
    p = (1 + np.tanh(0.5)) / 2
    assert p == pytest.approx(0.731059, abs=1e-6)
    m = pbit_sample_many(0.5, 2, 3, np.arange(SAMPLES))
    freq = np.mean(m == 1)
    assert abs(freq - p) <= 3 * np.sqrt(p * (1 - p) / SAMPLES)


def test_sign_zero_maps_to_plus_one():
    assert spin_from_uniform(0.0, 0.0) == 1.0
    assert spin_from_uniform(-np.tanh(0.25), 0.25) == 1.0


def test_scalar_and_vector_samples_agree():
    for step in range(20):
        s = pbit_sample(0.3, RngStream(9, 4, step))
        assert s == pbit_sample_many(0.3, 9, 4, step)


@pytest.mark.parametrize("I", [np.nan, np.inf, -np.inf])
def test_non_finite_input_rejected(I):
    with pytest.raises(DomainError):
        pbit_sample(I, RngStream(0))
    with pytest.raises(DomainError):
        node_step(0.0, I, PBitParams())


def test_deterministic_full_leak_is_tanh():
    x = node_step(0.2, 0.5, PBitParams(1.0, 1.0))
    assert x == pytest.approx(0.462117, abs=1e-6)


def test_deterministic_arithmetic():
    assert node_step(0.5, 0.0, PBitParams(0.3, 0.3)) == pytest.approx(0.35, abs=1e-15)


def test_stochastic_node_requires_stream():
    with pytest.raises(DomainError):
        node_step(0.0, 0.1, STOCH)


def test_stochastic_stationary_mean():
    # oracle: AR(1) moments of x' = (1-eta) x + k m with m iid given constant I
    eta = k = 0.3
    I = 0.5
    burn, T = 200, SAMPLES
    steps = np.arange(burn + T)
    m = np.where(uniform_pm1(21, 0, steps) + np.tanh(I) >= 0, 1.0, -1.0)
    x = 0.0
    xs = np.empty(burn + T)
    for t in range(burn + T):
        x = node_step(x, I, STOCH, RngStream(21, 0, int(steps[t])))
        xs[t] = x
    # the per-step node_step path and the vectorized spins agree
    x2 = 0.0
    for t in range(burn + T):
        x2 = (1 - eta) * x2 + k * m[t]
    assert x2 == xs[-1]
    mean = xs[burn:].mean()
    var = k**2 / (eta * (2 - eta)) * (1 - np.tanh(I) ** 2)
    n_eff = T * eta / (2 - eta)
    assert abs(mean - (k / eta) * np.tanh(I)) <= 3 * np.sqrt(var / n_eff)


def test_stationary_mean_with_independent_generator():
    eta = k = 0.3
    I = 0.5
    rng = np.random.default_rng(0)
    T = 100_000
    r = rng.uniform(-1, 1, T + 200)
    m = np.where(r + np.tanh(I) >= 0, 1.0, -1.0)
    x = 0.0
    acc = 0.0
    for t, mt in enumerate(m):
        x = (1 - eta) * x + k * mt
        if t >= 200:
            acc += x
    var = k**2 / (eta * (2 - eta)) * (1 - np.tanh(I) ** 2)
    assert abs(acc / T - np.tanh(I)) <= 3 * np.sqrt(var / (T * eta / (2 - eta)))


@given(
    x=st.floats(-1, 1),
    I=st.floats(-50, 50),
    leak=st.floats(0.01, 1.0),
    step=st.integers(0, 10**6),
    kind=st.sampled_from(list(NodeKind)),
)
def test_activation_stays_in_band(x, I, leak, step, kind):
    params = PBitParams(leak, leak, kind)
    x1 = node_step(x, I, params, RngStream(1, 0, step))
    assert abs(x1) <= max(abs(x), params.band) + 1e-12


@given(x=st.floats(-1, 1), I=st.floats(-5, 5), alpha=st.floats(0.01, 1.0))
def test_equal_leak_and_gain_is_standard_leaky_esn(x, I, alpha):
    assert node_step(x, I, PBitParams(alpha, alpha)) == pytest.approx((1 - alpha) * x + alpha * np.tanh(I), abs=1e-15)


def test_params_validation():
    with pytest.raises(DomainError):
        PBitParams(leak=0.0)
    with pytest.raises(DomainError):
        PBitParams(leak=1.5)
    with pytest.raises(DomainError):
        PBitParams(gain=0.0)
    with pytest.raises(DomainError):
        PBitParams(kind="quantum")
    assert PBitParams(kind="Stochastic").kind is NodeKind.STOCHASTIC
    assert NodeKind.STOCHASTIC.value == "stochastic"


@pytest.mark.parametrize("J", [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0])
def test_pair_chain_oracle(J):
    seq, _, _ = pair_chain_correlation(J, "sequential")
    # sequential updates are Gibbs sampling of exp(J m1 m2)
    assert seq == pytest.approx(np.tanh(J), abs=1e-12)
    if J:
        assert np.sign(seq) == np.sign(J)
    # synchronous updates decouple into two independent chains
    sync, _, _ = pair_chain_correlation(J, "synchronous")
    assert sync == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("order", ["sequential", "synchronous"])
@pytest.mark.parametrize("J", [-1.0, 0.5, 2.0])
def test_coupled_pair_matches_markov_chain(J, order):
    steps = 200_000
    sim = simulate_pair(J, steps, seed=3, order=order)
    exact, _, _ = pair_chain_correlation(J, order)
    assert abs(sim - exact) <= 3 * pair_chain_sigma(J, steps, order) + 1e-12


def test_pair_rejects_unknown_order():
    with pytest.raises(ValueError):
        simulate_pair(1.0, 10, order="random")
