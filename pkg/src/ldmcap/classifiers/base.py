"""Shared trained-model interface for all classifier families."""

from __future__ import annotations

import numpy as np


class TrainedModel:
    """A fitted classifier exposing per-class probabilities.

    Subclasses implement ``predict_proba_batch`` over a matrix of rows; the
    scalar ``predict_proba``/``predict`` contracts derive from it.  Probability
    vectors have one entry per class (including classes absent from training,
    which get probability 0 except where a family's voting scheme says
    otherwise), are non-negative, and sum to 1 within float tolerance.
    """

    def __init__(self, num_classes: int, n_features: int):
        self.num_classes = int(num_classes)
        self.n_features = int(n_features)

    def _check_rows(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(
                f"expected rows with {self.n_features} features, got shape {X.shape}"
            )
        return X

    def predict_proba_batch(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict_proba(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_features,):
            raise ValueError(
                f"expected a feature vector of length {self.n_features}, got shape {x.shape}"
            )
        return self.predict_proba_batch(x[None, :])[0]

    def predict_batch(self, X) -> np.ndarray:
        # argmax takes the first maximum, i.e. ties go to the lowest class index
        return np.argmax(self.predict_proba_batch(X), axis=1)

    def predict(self, x) -> int:
        return int(np.argmax(self.predict_proba(x)))


def normalize_rows(scores: np.ndarray, present: np.ndarray) -> np.ndarray:
    """Normalize probability rows; degenerate rows become uniform over present classes.

    ``present`` is a boolean mask of classes seen in training.
    """
    scores = np.where(np.isfinite(scores), scores, 0.0)
    scores = np.clip(scores, 0.0, None)
    sums = scores.sum(axis=1, keepdims=True)
    fallback = present.astype(np.float64) / max(int(present.sum()), 1)
    out = np.where(sums > 0.0, scores / np.where(sums > 0.0, sums, 1.0), fallback)
    return out


def log_softmax_rows(loglik: np.ndarray) -> np.ndarray:
    """Rows of exp(loglik) normalized to 1, computed stably; -inf maps to 0."""
    peak = np.max(loglik, axis=1, keepdims=True)
    peak = np.where(np.isfinite(peak), peak, 0.0)
    unnorm = np.exp(loglik - peak)
    unnorm[~np.isfinite(loglik)] = 0.0
    return unnorm / unnorm.sum(axis=1, keepdims=True)
