"""Single-node models: the stochastic p-bit and the deterministic tanh node.

A stochastic node emits a spin ``m = sgn(r + tanh(I))`` with ``r`` uniform
on [-1, 1) and passes it through a leaky filter

    x' = (1 - leak) * x + gain * m

so that the filtered activation has stationary mean ``(gain/leak) * tanh(I)``.
The deterministic node replaces ``m`` by its expectation ``tanh(I)``, which
is the forward-Euler step (unit time step) of the leaky ESN equation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rng import RngStream, uniform_pm1

__all__ = [
    "NodeKind",
    "PBitParams",
    "spin_from_uniform",
    "pbit_sample",
    "pbit_sample_many",
    "node_step",
    "node_update",
]


class NodeKind(str, enum.Enum):
    DETERMINISTIC = "deterministic"
    STOCHASTIC = "stochastic"

    @classmethod
    def parse(cls, value) -> "NodeKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown node kind {value!r}; expected 'deterministic' or 'stochastic'") from None


@dataclass(frozen=True)
class PBitParams:
    """Leak rate, drive gain and node kind.

    ``leak == gain`` (the default) gives unit stationary gain, i.e. the mean
    activation of a stochastic node equals ``tanh(I)``.
    """

    leak: float = 0.3
    gain: float = 0.3
    kind: NodeKind = NodeKind.DETERMINISTIC

    def __post_init__(self):
        object.__setattr__(self, "kind", NodeKind.parse(self.kind))
        if not (0.0 < self.leak <= 1.0):
            raise DomainError(f"leak must lie in (0, 1], got {self.leak}")
        if not self.gain > 0.0:
            raise DomainError(f"gain must be positive, got {self.gain}")

    @property
    def band(self) -> float:
        """Half-width of the invariant activation band, ``gain / leak``."""
        return self.gain / self.leak

    @property
    def stochastic(self) -> bool:
        return self.kind is NodeKind.STOCHASTIC


def _check_finite(name, value):
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{name} must be finite")


def spin_from_uniform(r, I):
    """``sgn(r + tanh(I))`` with sgn(0) mapped to +1."""
    return np.where(np.asarray(r) + np.tanh(I) >= 0.0, 1.0, -1.0)


def pbit_sample(I: float, rng: RngStream) -> int:
    _check_finite("I", I)
    return int(spin_from_uniform(rng.uniform(), I))


def pbit_sample_many(I, seed: int, node_id, step) -> np.ndarray:
    """Vectorized :func:`pbit_sample`; ``I``, ``node_id`` and ``step`` broadcast."""
    _check_finite("I", I)
    return spin_from_uniform(uniform_pm1(seed, node_id, step), I)


def node_update(x, I, params: PBitParams, r=None):
    """Leaky update on arrays given pre-drawn uniforms ``r`` (stochastic only)."""
    if params.stochastic:
        drive = spin_from_uniform(r, I)
    else:
        drive = np.tanh(I)
    return (1.0 - params.leak) * x + params.gain * drive


def node_step(x: float, I: float, params: PBitParams, rng: RngStream | None = None) -> float:
    """One time step of a single node.

    Stochastic nodes need ``rng``; deterministic nodes ignore it.
    """
    _check_finite("x", x)
    _check_finite("I", I)
    if params.stochastic:
        if rng is None:
            raise DomainError("stochastic node_step requires an RngStream")
        return float(node_update(x, I, params, rng.uniform()))
    return float(node_update(x, I, params))
