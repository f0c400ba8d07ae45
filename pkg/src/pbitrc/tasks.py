"""Benchmark signal generators: Mackey-Glass series and a nonlinear channel."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "MackeyGlassParams",
    "mackey_glass",
    "AffineRecord",
    "normalize_signal",
    "random_symbols",
    "ChannelParams",
    "ChannelDataset",
    "channel_dataset",
    "write_channel_csv",
]

# Longest delay line accepted by mackey_glass, in integration steps.
MAX_DELAY_STEPS = 10_000_000


@dataclass(frozen=True)
class MackeyGlassParams:
    beta: float = 0.2
    gamma: float = 0.1
    n: float = 10.0
    tau: float = 17.0
    dt: float = 0.1
    history_init: float = 1.2
    t_total: float = 500.0

    def __post_init__(self):
        if not (self.beta >= 0 and self.gamma > 0 and self.n > 0):
            raise DomainError("Mackey-Glass needs gamma, n > 0 and beta >= 0")
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if self.tau < 0 or self.t_total < 0:
            raise DomainError("tau and t_total must be non-negative")

    @property
    def delay_steps(self) -> int:
        return int(round(self.tau / self.dt))


def mackey_glass(params: MackeyGlassParams) -> np.ndarray:
    """Integrate the Mackey-Glass delay equation with classical RK4.

    Returns ``x`` on the grid ``t = 0, dt, ..., t_total``; ``x[0]`` equals
    the constant history. The delay is rounded to a whole number of steps.
    Delayed values at half steps come from cubic Hermite interpolation of
    stored grid values and slopes, which keeps the scheme fourth order.
    """
    beta, gamma, expo = float(params.beta), float(params.gamma), float(params.n)
    dt = float(params.dt)
    h0 = float(params.history_init)
    m = params.delay_steps
    if m > MAX_DELAY_STEPS:
        raise DomainError(f"delay of {m} steps exceeds the buffer limit {MAX_DELAY_STEPS}")
    steps = int(round(params.t_total / dt))

    # |xd| keeps non-integer exponents real if the state ever dips below zero
    def rhs(x, xd):
        return beta * xd / (1.0 + abs(xd) ** expo) - gamma * x

    x = [h0] * (steps + 1)
    if m == 0:
        for k in range(steps):
            xn = x[k]
            k1 = rhs(xn, xn)
            y = xn + 0.5 * dt * k1
            k2 = rhs(y, y)
            y = xn + 0.5 * dt * k2
            k3 = rhs(y, y)
            y = xn + dt * k3
            k4 = rhs(y, y)
            x[k + 1] = xn + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return np.array(x)

    f = [0.0] * (steps + 1)
    for k in range(steps):
        xn = x[k]
        j = k - m
        if j >= 0:
            xd0, xd1 = x[j], x[j + 1]
            xd_half = 0.5 * (xd0 + xd1) + dt / 8.0 * (f[j] - f[j + 1])
        else:
            xd0 = h0
            xd1 = h0 if j + 1 <= 0 else x[j + 1]
            xd_half = h0
        k1 = rhs(xn, xd0)
        f[k] = k1
        k2 = rhs(xn + 0.5 * dt * k1, xd_half)
        k3 = rhs(xn + 0.5 * dt * k2, xd_half)
        k4 = rhs(xn + dt * k3, xd1)
        x[k + 1] = xn + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return np.array(x)


@dataclass(frozen=True)
class AffineRecord:
    """``normalized = (raw - offset) * scale``."""

    offset: float
    scale: float

    def apply(self, seq):
        return (np.asarray(seq, dtype=float) - self.offset) * self.scale

    def inverse(self, seq):
        return np.asarray(seq, dtype=float) / self.scale + self.offset


def normalize_signal(seq, peak: float = 0.9):
    """Center on the mean and scale so the largest magnitude is ``peak``."""
    s = np.asarray(seq, dtype=float)
    if s.size < 2 or np.all(s == s.flat[0]):
        raise DomainError("cannot normalize a signal with fewer than two distinct values")
    offset = float(s.mean())
    scale = peak / float(np.max(np.abs(s - offset)))
    record = AffineRecord(offset, scale)
    return record.apply(s), record


def random_symbols(alphabet, T: int, rng: np.random.Generator) -> np.ndarray:
    a = np.asarray(alphabet, dtype=float)
    if a.size == 0:
        raise DomainError("empty alphabet")
    if T < 1:
        raise DomainError("T must be >= 1")
    return a[rng.integers(0, a.size, size=T)]


DEFAULT_TAPS = (0.08, -0.12, 1.0, 0.18, -0.1, 0.091, -0.05, 0.04, 0.03, 0.01)
DEFAULT_POLY = (1.0, 0.036, -0.011)
TAP_LAGS = tuple(range(-2, 8))


@dataclass(frozen=True)
class ChannelParams:
    """Channel taps for lags -2..7, cubic coefficients, noise and symbol set.

    ``composition="fir_poly"`` filters first and applies the polynomial to
    the filtered signal; ``"literal"`` raises each symbol to the power
    inside the tap sum.
    """

    taps: tuple = DEFAULT_TAPS
    poly: tuple = DEFAULT_POLY
    noise_halfwidth: float = 0.0
    alphabet: tuple = (-3.0, -1.0, 1.0, 3.0)
    output_delay: int = 2
    composition: str = "fir_poly"

    def __post_init__(self):
        object.__setattr__(self, "taps", tuple(float(v) for v in self.taps))
        object.__setattr__(self, "poly", tuple(float(v) for v in self.poly))
        object.__setattr__(self, "alphabet", tuple(float(v) for v in self.alphabet))
        if len(self.taps) != len(TAP_LAGS):
            raise DomainError(f"need exactly {len(TAP_LAGS)} taps, got {len(self.taps)}")
        if len(self.poly) != 3:
            raise DomainError(f"need exactly 3 polynomial coefficients, got {len(self.poly)}")
        if self.noise_halfwidth < 0:
            raise DomainError("noise_halfwidth must be >= 0")
        if not self.alphabet or np.any(np.diff(self.alphabet) <= 0):
            raise DomainError("alphabet must be non-empty and strictly increasing")
        if int(self.output_delay) != self.output_delay or self.output_delay < 0:
            raise DomainError("output_delay must be a non-negative integer")
        if self.composition not in ("fir_poly", "literal"):
            raise DomainError(f"unknown composition {self.composition!r}")


@dataclass
class ChannelDataset:
    t: np.ndarray
    d: np.ndarray
    q: np.ndarray
    u: np.ndarray
    target: np.ndarray

    def __len__(self):
        return len(self.t)


def channel_dataset(params: ChannelParams, T: int, rng: np.random.Generator, d=None) -> ChannelDataset:
    """Symbols through the distorting channel, edges trimmed.

    ``d`` may be supplied to bypass symbol generation (it must then have
    length ``T``). Noise is uniform on ``(-c, c)``.
    """
    span = len(TAP_LAGS)
    if T <= span:
        raise DomainError(f"T must exceed the tap span ({span}), got {T}")
    if d is None:
        d = random_symbols(params.alphabet, T, rng)
    d = np.asarray(d, dtype=float)
    if d.shape != (T,):
        raise DomainError("d must have length T")
    lo = max(max(TAP_LAGS), params.output_delay)
    hi = T - 1 + min(TAP_LAGS)
    if hi < lo:
        raise DomainError("sequence too short after edge trimming")
    t = np.arange(lo, hi + 1)
    shifted = np.stack([d[t - lag] for lag in TAP_LAGS])  # (10, len)
    taps = np.asarray(params.taps)[:, None]
    q = np.sum(taps * shifted, axis=0)
    A1, A2, A3 = params.poly
    if params.composition == "fir_poly":
        u = A1 * q + A2 * q**2 + A3 * q**3
    else:
        u = sum(A * np.sum(taps * shifted**p, axis=0) for p, A in zip((1, 2, 3), params.poly))
    if params.noise_halfwidth > 0:
        c = params.noise_halfwidth
        u = u + rng.uniform(-c, c, size=u.shape)
    target = d[t - params.output_delay]
    return ChannelDataset(t=t, d=d[t], q=q, u=u, target=target)


def write_channel_csv(dataset: ChannelDataset, dest) -> None:
    """Write columns t, d, q, u, target to a path or an open text file."""
    if hasattr(dest, "write"):
        _write_channel_rows(dataset, dest)
        return
    with open(dest, "w", newline="") as fh:
        _write_channel_rows(dataset, fh)


def _write_channel_rows(dataset, fh):
    w = csv.writer(fh)
    w.writerow(["t", "d", "q", "u", "target"])
    for row in zip(dataset.t, dataset.d, dataset.q, dataset.u, dataset.target):
        w.writerow([int(row[0])] + [repr(float(v)) for v in row[1:]])
