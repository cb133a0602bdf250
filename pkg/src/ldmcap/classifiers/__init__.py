"""Classifier families and the spec objects that select and configure them.

A :class:`ClassifierSpec` pairs a family name with integer hyperparameters
and has a text form for CLI use, e.g. ``knn:k=3`` or
``random_forest:n=10,max_features=1,max_depth=5``.

Hyperparameters left unset fall back to per-family defaults; the two analysis
pipelines then overlay their own conventions via :func:`with_defaults` —
matrix-building runs cap tree depth at 5 while recorder runs grow trees
unpruned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..dataset import LabeledDataset
from .adaboost import AdaBoostModel, fit_adaboost
from .base import TrainedModel
from .forest import RandomForestModel, fit_random_forest
from .gaussian import GaussianNbModel, QdaModel, fit_gaussian_nb, fit_qda
from .knn import KnnModel, fit_knn
from .tree import DecisionTreeModel, fit_decision_tree

FAMILIES = ("knn", "gaussian_nb", "decision_tree", "random_forest", "qda", "adaboost")

_ALLOWED_PARAMS: dict[str, frozenset[str]] = {
    "knn": frozenset({"k"}),
    "gaussian_nb": frozenset(),
    "decision_tree": frozenset({"max_depth"}),
    "random_forest": frozenset({"n", "max_features", "max_depth"}),
    "qda": frozenset(),
    "adaboost": frozenset({"rounds"}),
}

# Everyday defaults: trees and forest members grow unpruned unless capped.
FAMILY_DEFAULTS: dict[str, dict[str, int]] = {
    "knn": {"k": 5},
    "gaussian_nb": {},
    "decision_tree": {},
    "random_forest": {"n": 10, "max_features": 1},
    "qda": {},
    "adaboost": {"rounds": 50},
}

# Matrix-building runs additionally cap tree depth at 5.
_LDM_EXTRAS: dict[str, dict[str, int]] = {
    "decision_tree": {"max_depth": 5},
    "random_forest": {"max_depth": 5},
}


@dataclass(frozen=True)
class ClassifierSpec:
    """A classifier family plus its integer hyperparameters."""

    family: str
    params: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in _ALLOWED_PARAMS:
            raise ValueError(
                f"unknown classifier family {self.family!r}; choose from {FAMILIES}"
            )
        allowed = _ALLOWED_PARAMS[self.family]
        clean: dict[str, int] = {}
        for key, value in dict(self.params).items():
            if key not in allowed:
                raise ValueError(
                    f"{self.family} does not accept parameter {key!r}"
                    + (f"; allowed: {sorted(allowed)}" if allowed else "")
                )
            value = int(value)
            if value < 1:
                raise ValueError(f"{self.family}:{key} must be >= 1, got {value}")
            clean[key] = value
        object.__setattr__(self, "params", clean)

    def to_string(self) -> str:
        if not self.params:
            return self.family
        joined = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}:{joined}"


def parse_spec(text: str) -> ClassifierSpec:
    """Parse the textual spec form ``family`` or ``family:key=val,key=val``."""
    text = text.strip()
    family, _, rest = text.partition(":")
    params: dict[str, int] = {}
    if rest:
        for item in rest.split(","):
            key, sep, raw = item.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ValueError(f"malformed spec parameter {item!r} in {text!r}")
            try:
                params[key] = int(raw)
            except ValueError:
                raise ValueError(
                    f"spec parameter {key!r} needs an integer value, got {raw!r}"
                ) from None
    return ClassifierSpec(family.strip(), params)


def with_defaults(spec: ClassifierSpec, pipeline: str = "none") -> ClassifierSpec:
    """Fill unset hyperparameters with family defaults plus pipeline overlays.

    ``pipeline`` is ``"ldm"`` (depth-5 tree caps), ``"recorder"`` (unpruned
    trees), or ``"none"`` (family defaults only).
    """
    if pipeline not in ("ldm", "recorder", "none"):
        raise ValueError(f"unknown pipeline {pipeline!r}")
    merged = dict(FAMILY_DEFAULTS[spec.family])
    if pipeline == "ldm":
        merged.update(_LDM_EXTRAS.get(spec.family, {}))
    merged.update(spec.params)
    return ClassifierSpec(spec.family, merged)


def fit(
    spec: ClassifierSpec,
    train: LabeledDataset,
    rng: np.random.Generator | None = None,
) -> TrainedModel:
    """Train the classifier a spec describes.

    Only stochastic families (random_forest) consume ``rng``; deterministic
    families ignore it, so refits with any seed are identical for them.
    """
    spec = with_defaults(spec, "none")
    X, y, c = train.features, train.labels, train.num_classes
    p = spec.params
    if spec.family == "knn":
        return fit_knn(X, y, c, k=p["k"])
    if spec.family == "gaussian_nb":
        return fit_gaussian_nb(X, y, c)
    if spec.family == "decision_tree":
        return fit_decision_tree(X, y, c, max_depth=p.get("max_depth"))
    if spec.family == "random_forest":
        return fit_random_forest(
            X, y, c,
            n_estimators=p["n"],
            max_features=p["max_features"],
            max_depth=p.get("max_depth"),
            rng=rng,
        )
    if spec.family == "qda":
        return fit_qda(X, y, c)
    if spec.family == "adaboost":
        return fit_adaboost(X, y, c, rounds=p["rounds"])
    raise AssertionError(f"unhandled family {spec.family!r}")


def predict_proba(model: TrainedModel, x) -> np.ndarray:
    """Class-probability vector for one feature vector."""
    return model.predict_proba(x)


def predict(model: TrainedModel, x) -> int:
    """Most probable class for one feature vector; ties go to the lowest index."""
    return model.predict(x)


__all__ = [
    "FAMILIES",
    "FAMILY_DEFAULTS",
    "ClassifierSpec",
    "TrainedModel",
    "AdaBoostModel",
    "DecisionTreeModel",
    "GaussianNbModel",
    "KnnModel",
    "QdaModel",
    "RandomForestModel",
    "fit",
    "parse_spec",
    "predict",
    "predict_proba",
    "with_defaults",
]
