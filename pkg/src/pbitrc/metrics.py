"""Error measures: normalized mean-square error and symbol error rate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["MetricReport", "nmse", "classify", "ser"]


@dataclass
class MetricReport:
    nmse: float | None = None
    ser: float | None = None
    count: int = 0


def _pair(y, d):
    y = np.asarray(y, dtype=float).ravel()
    d = np.asarray(d, dtype=float).ravel()
    if y.shape != d.shape:
        raise DomainError(f"length mismatch: {y.size} outputs vs {d.size} targets")
    return y, d


def nmse(y, d, normalization: str = "variance") -> float:
    """``sum((y-d)^2) / sum((d-mean d)^2)``.

    ``normalization="power"`` divides by ``sum(d^2)`` instead.
    """
    y, d = _pair(y, d)
    if y.size < 2:
        raise DomainError("nmse needs at least two samples")
    if normalization == "variance":
        denom = float(np.sum((d - d.mean()) ** 2))
    elif normalization == "power":
        denom = float(np.sum(d**2))
    else:
        raise DomainError(f"unknown normalization {normalization!r}")
    if denom == 0.0:
        raise DomainError("target is constant; nmse denominator is zero")
    return float(np.sum((y - d) ** 2)) / denom


def classify(y, alphabet) -> np.ndarray:
    """Index of the nearest symbol; ties go to the smaller symbol."""
    a = np.asarray(alphabet, dtype=float)
    if a.size == 0:
        raise DomainError("empty alphabet")
    if np.any(np.diff(a) <= 0):
        raise DomainError("alphabet must be strictly increasing")
    y = np.asarray(y, dtype=float).ravel()
    # argmin returns the first (smallest) symbol among equal distances.
    return np.argmin(np.abs(y[:, None] - a[None, :]), axis=1)


def ser(y, d, alphabet) -> float:
    y, d = _pair(y, d)
    a = np.asarray(alphabet, dtype=float)
    idx_d = classify(d, a)
    if not np.all(a[idx_d] == d):
        raise DomainError("targets contain values outside the alphabet")
    if y.size == 0:
        raise DomainError("ser needs at least one sample")
    return float(np.mean(classify(y, a) != idx_d))
