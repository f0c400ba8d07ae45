"""Ridge-regression readout ``y = W_out f``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericError
from .reservoir import FeatureLayout

__all__ = ["ReadoutWeights", "RidgeConfig", "default_lambda", "ridge_fit", "predict"]


@dataclass(frozen=True)
class RidgeConfig:
    """``lam=None`` selects :func:`default_lambda` at fit time."""

    lam: float | None = None
    washout: int = 100

    def __post_init__(self):
        if self.lam is not None and not self.lam >= 0:
            raise DomainError(f"ridge lambda must be >= 0, got {self.lam}")
        if self.washout < 0:
            raise DomainError("washout must be >= 0")


@dataclass
class ReadoutWeights:
    W_out: np.ndarray
    feature_layout: FeatureLayout
    lam: float = 0.0


def _gram(X):
    return X.T @ X


def default_lambda(X) -> float:
    """Scale-aware default ``1e-6 * trace(X^T X) / F``."""
    X = np.asarray(X, dtype=float)
    return 1e-6 * float(np.einsum("ij,ij->", X, X)) / X.shape[1]


def ridge_fit(X, Y, lam=None, layout: FeatureLayout | None = None) -> ReadoutWeights:
    """Solve ``(X^T X + lam I) W^T = X^T Y`` by Cholesky factorization.

    If the factorization fails the ridge term is raised to at least
    ``1e-12 * trace(X^T X) / F`` and then grown by factors of ten, up to
    three decades. The value actually used is returned in ``.lam``.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim != 2:
        raise DomainError("X must be a T x F matrix")
    if Y.ndim == 1:
        Y = Y[:, None]
    if len(X) < 1 or Y.shape[0] != X.shape[0]:
        raise DomainError(f"X has {len(X)} rows but Y has {Y.shape[0]}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
        raise DomainError("non-finite training data")
    F = X.shape[1]
    if layout is None:
        layout = FeatureLayout(False, F, 0)
    elif layout.width != F:
        raise DomainError(f"layout width {layout.width} does not match {F} feature columns")
    if lam is None:
        lam = default_lambda(X)
    if lam < 0:
        raise DomainError("ridge lambda must be >= 0")

    G = _gram(X)
    rhs = X.T @ Y
    floor = 1e-12 * float(np.trace(G)) / F
    attempts = [lam] + [max(lam, floor) * 10.0**k for k in range(4)]
    for lam_try in attempts:
        A = G + lam_try * np.eye(F)
        try:
            factor = scipy.linalg.cho_factor(A, lower=False, check_finite=False)
        except np.linalg.LinAlgError:
            continue
        W = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
        if np.all(np.isfinite(W)):
            return ReadoutWeights(W_out=W.T.copy(), feature_layout=layout, lam=float(lam_try))
    raise NumericError("ridge normal equations could not be factorized even after jitter escalation")


def predict(readout: ReadoutWeights, features):
    f = np.asarray(features, dtype=float)
    if f.shape[-1] != readout.W_out.shape[1]:
        raise DomainError(f"expected {readout.W_out.shape[1]} features, got {f.shape[-1]}")
    return f @ readout.W_out.T
