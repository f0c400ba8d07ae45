"""Random sparse reservoirs of p-bit or tanh nodes.

Weights are drawn once per seed, the recurrent matrix is rescaled to a
target spectral radius, and the network is driven either by an external
signal (teacher forcing) or by its own readout (free running).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .errors import ConstructionError, ConvergenceError, DomainError, NumericError, ScalingError
from .pbit import PBitParams, node_update
from .rng import child_generator, uniform_pm1

__all__ = [
    "ReservoirConfig",
    "WeightSet",
    "ReservoirState",
    "FeatureLayout",
    "spectral_radius",
    "scale_spectral_radius",
    "build_weights",
    "initial_state",
    "reservoir_step",
    "run_teacher_forced",
    "run_free",
]

# Uniform draws for stochastic nodes are generated this many steps at a time.
_RNG_CHUNK = 256


@dataclass(frozen=True)
class ReservoirConfig:
    N: int = 100
    rho_target: float = 0.9
    density: float = 0.1
    input_scale: float = 1.0
    fb_scale: float = 0.0
    bias_scale: float = 0.1
    node: PBitParams = field(default_factory=PBitParams)
    seed: int = 0
    n_inputs: int = 1
    n_outputs: int = 1
    feature_bias: bool = True
    feature_input: bool = True

    def __post_init__(self):
        if isinstance(self.node, dict):
            object.__setattr__(self, "node", PBitParams(**self.node))
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if not 0.0 < self.rho_target < 1.0:
            raise DomainError(f"rho_target must lie in (0, 1), got {self.rho_target}")
        if not 0.0 < self.density <= 1.0:
            raise DomainError(f"density must lie in (0, 1], got {self.density}")
        for name in ("input_scale", "fb_scale", "bias_scale"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.n_inputs < 1 or self.n_outputs < 1:
            raise DomainError("n_inputs and n_outputs must be >= 1")

    @property
    def layout(self) -> "FeatureLayout":
        return FeatureLayout(self.feature_bias, self.N, self.n_inputs if self.feature_input else 0)


@dataclass(frozen=True)
class FeatureLayout:
    """Column layout of a feature row: ``[1?, x (n_state), u (n_input)]``."""

    bias: bool
    n_state: int
    n_input: int

    @property
    def width(self) -> int:
        return int(self.bias) + self.n_state + self.n_input

    def assemble(self, x, u) -> np.ndarray:
        """Feature rows from states ``x`` (T x N or N) and inputs ``u``."""
        x = np.asarray(x, dtype=float)
        lead = x.shape[:-1]
        parts = []
        if self.bias:
            parts.append(np.ones(lead + (1,)))
        parts.append(x)
        if self.n_input:
            parts.append(np.asarray(u, dtype=float).reshape(lead + (self.n_input,)))
        return np.concatenate(parts, axis=-1)


@dataclass
class WeightSet:
    W_in: np.ndarray
    W_self: sp.csr_matrix
    W_fb: np.ndarray
    bias: np.ndarray

    @property
    def N(self) -> int:
        return self.W_self.shape[0]


@dataclass
class ReservoirState:
    x: np.ndarray
    m: np.ndarray
    y_prev: np.ndarray
    step: int = 0


def _as_square(W):
    if sp.issparse(W):
        W = W.tocsr()
        data = W.data
    else:
        W = np.asarray(W, dtype=float)
        data = W
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {W.shape}")
    if not np.all(np.isfinite(data)):
        raise DomainError("matrix entries must be finite")
    return W


def spectral_radius(W, tol: float = 1e-12, max_iter: int = 100_000, seed: int = 0, block: int = 8) -> float:
    """Largest eigenvalue modulus of a square (dense or sparse) matrix.

    Block power iteration: an orthonormal block is repeatedly multiplied by
    ``W`` and re-orthonormalized, and the Ritz values of the projected
    ``block x block`` matrix give the estimate. A block of at least two
    columns resolves complex-conjugate dominant pairs, which make the
    plain single-vector norm ratio oscillate. If the estimate stagnates
    the block is doubled and the iteration restarted from a fresh random
    block.
    """
    W = _as_square(W)
    n = W.shape[0]
    if n == 0:
        raise DomainError("empty matrix")
    rng = np.random.default_rng(seed)
    p = min(n, max(2, block))
    restart_every = 4000
    best = None
    it = 0
    while it < max_iter:
        Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
        prev, settled = None, 0
        for _ in range(min(restart_every, max_iter - it)):
            it += 1
            Z = np.asarray(W @ Q)
            if not np.any(Z):
                return 0.0
            if not np.all(np.isfinite(Z)):
                raise NumericError("non-finite values during power iteration")
            est = float(np.max(np.abs(np.linalg.eigvals(Q.T @ Z))))
            best = est
            Q, R = np.linalg.qr(Z)
            # drop directions W has annihilated so the block tracks range(W^k)
            diag = np.abs(np.diag(R))
            keep = diag > 1e-13 * diag.max()
            if not keep.all():
                Q = Q[:, keep]
                prev, settled = None, 0
                continue
            if prev is not None and abs(est - prev) <= tol * max(est, np.finfo(float).tiny):
                settled += 1
                if settled >= 3:
                    return est
            else:
                settled = 0
            prev = est
        if p == n:
            break
        p = min(n, 2 * p)
    raise ConvergenceError(f"spectral radius did not converge in {it} iterations", estimate=best)


def scale_spectral_radius(W, rho_target: float):
    """Return ``W * rho_target / rho(W)``; sparse input stays sparse."""
    rho = spectral_radius(W)
    if rho == 0.0:
        raise ScalingError("matrix has zero spectral radius (nilpotent or zero); cannot rescale")
    return W * (rho_target / rho)


def build_weights(config: ReservoirConfig) -> WeightSet:
    """Draw a reservoir from ``config.seed``.

    Recurrent entries are nonzero with probability ``density`` and then
    uniform on (-1, 1); input, feedback and bias entries are dense uniform
    within their scales.
    """
    N = config.N
    rng = child_generator(config.seed, "weights")
    mask = rng.random((N, N)) < config.density
    values = rng.uniform(-1.0, 1.0, size=(N, N))
    W = sp.csr_matrix(np.where(mask, values, 0.0))
    if W.nnz == 0:
        raise ConstructionError(
            f"all-zero recurrent matrix for N={N}, density={config.density}, seed={config.seed}; "
            "choose a different seed or a larger density"
        )
    try:
        W_self = scale_spectral_radius(W, config.rho_target).tocsr()
    except ScalingError as exc:
        raise ConstructionError(f"{exc}; choose a different seed or a larger density") from None
    W_in = rng.uniform(-config.input_scale, config.input_scale, size=(N, config.n_inputs))
    W_fb = rng.uniform(-config.fb_scale, config.fb_scale, size=(N, config.n_outputs))
    bias = rng.uniform(-config.bias_scale, config.bias_scale, size=N)
    return WeightSet(W_in=W_in, W_self=W_self, W_fb=W_fb, bias=bias)


def initial_state(config: ReservoirConfig) -> ReservoirState:
    return ReservoirState(
        x=np.zeros(config.N),
        m=np.zeros(config.N),
        y_prev=np.zeros(config.n_outputs),
        step=0,
    )


def _check_dims(weights: WeightSet, config: ReservoirConfig):
    N = config.N
    if weights.W_self.shape != (N, N) or weights.W_in.shape != (N, config.n_inputs) \
            or weights.W_fb.shape != (N, config.n_outputs) or weights.bias.shape != (N,):
        raise DomainError("weight shapes do not match the reservoir config")


def _net_input(weights, x, u, y_prev):
    return weights.W_in @ u + weights.W_fb @ y_prev + weights.W_self @ x + weights.bias


def reservoir_step(state: ReservoirState, u_t, weights: WeightSet, config: ReservoirConfig) -> ReservoirState:
    """Advance every node by one step. ``y_prev`` is carried over unchanged."""
    _check_dims(weights, config)
    u = np.atleast_1d(np.asarray(u_t, dtype=float))
    if u.shape != (config.n_inputs,):
        raise DomainError(f"input must have {config.n_inputs} entries, got shape {u.shape}")
    if state.x.shape != (config.N,):
        raise DomainError("state size does not match the reservoir")
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(state.x))):
        raise DomainError("non-finite input or state")
    I = _net_input(weights, state.x, u, state.y_prev)
    step = state.step + 1
    node = config.node
    if node.stochastic:
        r = uniform_pm1(config.seed, np.arange(config.N), step)
        m = np.where(r + np.tanh(I) >= 0.0, 1.0, -1.0)
        x = (1.0 - node.leak) * state.x + node.gain * m
    else:
        m = state.m
        x = node_update(state.x, I, node)
    return ReservoirState(x=x, m=m, y_prev=state.y_prev.copy(), step=step)


class _Noise:
    """Chunked access to the per-(node, step) uniforms of one reservoir."""

    def __init__(self, config: ReservoirConfig):
        self.seed = config.seed
        self.nodes = np.arange(config.N)[None, :]
        self.start = None
        self.block = None

    def at(self, step):
        if self.block is None or not self.start <= step < self.start + len(self.block):
            self.start = step
            steps = np.arange(step, step + _RNG_CHUNK)[:, None]
            self.block = uniform_pm1(self.seed, self.nodes, steps)
        return self.block[step - self.start]


def _advance(state, u, weights, config, noise):
    # Same arithmetic as reservoir_step, in place and without validation.
    I = _net_input(weights, state.x, u, state.y_prev)
    state.step += 1
    node = config.node
    if node.stochastic:
        state.m = np.where(noise.at(state.step) + np.tanh(I) >= 0.0, 1.0, -1.0)
        state.x = (1.0 - node.leak) * state.x + node.gain * state.m
    else:
        state.x = node_update(state.x, I, node)


def _as_series(a, width, name):
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[1] != width:
        raise DomainError(f"{name} must have shape (T, {width}), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} must be finite")
    return a


def _copy_state(state):
    return ReservoirState(state.x.copy(), state.m.copy(), state.y_prev.copy(), state.step)


def run_teacher_forced(
    weights: WeightSet,
    config: ReservoirConfig,
    inputs,
    feedback_targets=None,
    washout: int = 100,
    state: ReservoirState | None = None,
    return_state: bool = False,
):
    """Drive the reservoir with ``inputs`` and harvest feature rows.

    When ``feedback_targets`` is given, ``y_prev`` at step t is the target at
    t-1 (zero at the first step). Rows for the first ``washout`` steps are
    dropped. Starts from ``state`` or from x = 0.
    """
    _check_dims(weights, config)
    U = _as_series(inputs, config.n_inputs, "inputs")
    T = len(U)
    if not 0 <= washout < T:
        raise DomainError(f"washout ({washout}) must be smaller than the number of steps ({T})")
    Y = None
    if feedback_targets is not None:
        Y = _as_series(feedback_targets, config.n_outputs, "feedback_targets")
        if len(Y) != T:
            raise DomainError("feedback_targets must have as many rows as inputs")
    state = initial_state(config) if state is None else _copy_state(state)
    noise = _Noise(config)
    X = np.empty((T, config.N))
    for t in range(T):
        if Y is not None and t > 0:
            state.y_prev = Y[t - 1].copy()
        _advance(state, U[t], weights, config, noise)
        X[t] = state.x
    features = config.layout.assemble(X[washout:], U[washout:])
    if return_state:
        return features, state
    return features


def run_free(
    weights: WeightSet,
    config: ReservoirConfig,
    readout,
    prime,
    horizon: int,
    state: ReservoirState | None = None,
    return_state: bool = False,
):
    """Prime on a true signal, then feed the readout back as the input.

    During priming the input is ``prime[t]`` and ``y_prev`` follows the
    readout. Each of the ``horizon`` free steps uses the previous readout
    value as its input and emits the new readout value.
    """
    _check_dims(weights, config)
    layout = config.layout
    if readout.feature_layout != layout:
        raise DomainError(f"readout layout {readout.feature_layout} does not match reservoir layout {layout}")
    if config.n_outputs != config.n_inputs:
        raise DomainError("free running needs as many outputs as inputs")
    if horizon < 0:
        raise DomainError("horizon must be non-negative")
    P = _as_series(prime, config.n_inputs, "prime")
    state = initial_state(config) if state is None else _copy_state(state)
    noise = _Noise(config)
    y = state.y_prev.copy()
    for t in range(len(P)):
        _advance(state, P[t], weights, config, noise)
        y = readout.W_out @ layout.assemble(state.x, P[t])
        state.y_prev = y
    out = np.empty((horizon, config.n_outputs))
    for j in range(horizon):
        u = y
        _advance(state, u, weights, config, noise)
        y = readout.W_out @ layout.assemble(state.x, u)
        if not np.all(np.isfinite(y)):
            raise NumericError(f"free run diverged at step {j}")
        state.y_prev = y
        out[j] = y
    if return_state:
        return out, state
    return out


def with_seed(config: ReservoirConfig, seed: int) -> ReservoirConfig:
    return replace(config, seed=int(seed))
