"""Gaussian generative classifiers: naive Bayes and quadratic discriminant analysis.

Both compute class posteriors through log-likelihoods and a log-sum-exp
normalization, so tiny densities never underflow to an all-zero row.  Classes
with no training examples get prior 0 and posterior 0 — a frequent situation
once labels are randomized.
"""

from __future__ import annotations

import numpy as np

from .base import TrainedModel, log_softmax_rows

_LOG_TWO_PI = float(np.log(2.0 * np.pi))


class GaussianNbModel(TrainedModel):
    """Per-class, per-feature Gaussians with shared variance smoothing.

    Every variance gets 1e-9 times the largest overall feature variance added
    (floored at 1e-12 for degenerate all-constant data) so single-example
    classes cannot produce a zero variance.
    """

    def __init__(self, features: np.ndarray, labels: np.ndarray, num_classes: int):
        n, d = features.shape
        super().__init__(num_classes, d)
        counts = np.bincount(labels, minlength=num_classes)
        self._present = counts > 0
        self._log_prior = np.full(num_classes, -np.inf)
        self._log_prior[self._present] = np.log(counts[self._present] / n)

        smoothing = max(1e-9 * float(features.var(axis=0).max()), 1e-12)
        self._means = np.zeros((num_classes, d))
        self._vars = np.ones((num_classes, d))
        for c in np.flatnonzero(self._present):
            rows = features[labels == c]
            self._means[c] = rows.mean(axis=0)
            self._vars[c] = rows.var(axis=0) + smoothing

    def predict_proba_batch(self, X) -> np.ndarray:
        X = self._check_rows(X)
        diff = X[:, None, :] - self._means[None, :, :]  # (n, C, d)
        loglik = -0.5 * (
            np.log(self._vars)[None, :, :] + _LOG_TWO_PI + diff**2 / self._vars[None, :, :]
        ).sum(axis=2)
        loglik = loglik + self._log_prior[None, :]
        loglik[:, ~self._present] = -np.inf
        return log_softmax_rows(loglik)


def fit_gaussian_nb(features, labels, num_classes) -> GaussianNbModel:
    return GaussianNbModel(features, labels, num_classes)


class QdaModel(TrainedModel):
    """Full per-class Gaussians (quadratic decision boundaries).

    Each class covariance gets a ridge of 1e-6 * trace/d added to its
    diagonal; classes too small to have any scatter (trace 0) borrow the
    whole-dataset trace instead, with an absolute floor, so the Cholesky
    factorization always succeeds under randomized labels.
    """

    def __init__(self, features: np.ndarray, labels: np.ndarray, num_classes: int):
        n, d = features.shape
        super().__init__(num_classes, d)
        counts = np.bincount(labels, minlength=num_classes)
        self._present = counts > 0
        self._log_prior = np.full(num_classes, -np.inf)
        self._log_prior[self._present] = np.log(counts[self._present] / n)

        pooled = features - features.mean(axis=0)
        pooled_trace = float(np.einsum("ij,ij->", pooled, pooled)) / n
        self._means = np.zeros((num_classes, d))
        self._chol = [None] * num_classes
        self._log_det = np.zeros(num_classes)
        for c in np.flatnonzero(self._present):
            rows = features[labels == c]
            self._means[c] = rows.mean(axis=0)
            centered = rows - self._means[c]
            cov = centered.T @ centered / rows.shape[0]
            trace = float(np.trace(cov))
            ridge = 1e-6 * (trace if trace > 0.0 else pooled_trace) / d
            ridge = max(ridge, 1e-12)
            cov = cov + ridge * np.eye(d)
            for _ in range(40):  # widen the ridge until the factorization holds
                try:
                    chol = np.linalg.cholesky(cov)
                    break
                except np.linalg.LinAlgError:
                    ridge *= 10.0
                    cov = cov + ridge * np.eye(d)
            self._chol[c] = chol
            self._log_det[c] = 2.0 * float(np.log(np.diag(chol)).sum())

    def predict_proba_batch(self, X) -> np.ndarray:
        X = self._check_rows(X)
        n = X.shape[0]
        loglik = np.full((n, self.num_classes), -np.inf)
        for c in np.flatnonzero(self._present):
            diff = X - self._means[c]
            solved = np.linalg.solve(self._chol[c], diff.T)  # lower-triangular system
            maha = np.einsum("ij,ij->j", solved, solved)
            loglik[:, c] = self._log_prior[c] - 0.5 * (
                self._log_det[c] + self.n_features * _LOG_TWO_PI + maha
            )
        return log_softmax_rows(loglik)


def fit_qda(features, labels, num_classes) -> QdaModel:
    return QdaModel(features, labels, num_classes)
