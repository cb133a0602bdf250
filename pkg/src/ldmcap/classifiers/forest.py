"""Random forest: bagged decision trees with per-split feature subsampling."""

from __future__ import annotations

import numpy as np

from .base import TrainedModel
from .tree import DecisionTreeModel


class RandomForestModel(TrainedModel):
    """Probabilities are the mean of the member trees' leaf frequencies.

    Each tree is grown on a bootstrap resample of the training rows; all of
    the randomness (bootstraps and per-split feature choices) is drawn
    sequentially from the one generator passed in, so a seed fixes the forest.
    """

    def __init__(
        self,
        features: np.ndarray,
        labels: np.ndarray,
        num_classes: int,
        n_estimators: int,
        max_features: int | None,
        max_depth: int | None,
        rng: np.random.Generator,
    ):
        super().__init__(num_classes, features.shape[1])
        n = features.shape[0]
        self._trees = []
        for _ in range(n_estimators):
            boot = rng.integers(0, n, size=n)
            self._trees.append(
                DecisionTreeModel(
                    features[boot], labels[boot], num_classes,
                    max_depth=max_depth, max_features=max_features, rng=rng,
                )
            )

    def predict_proba_batch(self, X) -> np.ndarray:
        X = self._check_rows(X)
        acc = np.zeros((X.shape[0], self.num_classes))
        for tree in self._trees:
            acc += tree.predict_proba_batch(X)
        return acc / len(self._trees)


def fit_random_forest(
    features,
    labels,
    num_classes,
    n_estimators: int = 10,
    max_features: int | None = 1,
    max_depth: int | None = None,
    rng: np.random.Generator | None = None,
) -> RandomForestModel:
    if n_estimators < 1:
        raise ValueError(f"n_estimators must be at least 1, got {n_estimators}")
    if rng is None:
        rng = np.random.default_rng(0)
    return RandomForestModel(
        features, labels, num_classes, n_estimators, max_features, max_depth, rng
    )
