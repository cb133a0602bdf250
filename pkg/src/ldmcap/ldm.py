"""Labeling-distribution matrices.

A trained classifier induces a probability distribution over every possible
labeling of a fixed holdout set: assuming per-point conditional independence,
the probability of labeling ``l`` is the product of the per-point class
probabilities ``prod_j P(class l_j | z_j)``.  Stacking that distribution —
one column per training run on permuted labels — gives the
labeling-distribution matrix analyzed by the Dirichlet machinery.

Labelings are indexed lexicographically, big-endian in base C: labeling
``(l_0, .., l_{N'-1})`` sits at row ``sum_j l_j * C**(N'-1-j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .classifiers import ClassifierSpec, TrainedModel, fit, with_defaults
from .dataset import LabeledDataset, permute_labels, split_train_holdout
from .errors import CapacityLimitError
from .seeding import derive_seed, make_rng

#: Hard cap on the number of enumerable labelings C**N'.
ENUMERATION_LIMIT = 10_000_000

#: Smoothing added to every simplex entry before renormalizing, so that
#: downstream log-likelihoods never see an exact zero.
DEFAULT_EPSILON = 1e-10


def _check_space(num_classes: int, holdout_size: int) -> int:
    if num_classes < 2:
        raise ValueError(f"num_classes must be at least 2, got {num_classes}")
    if holdout_size < 1:
        raise ValueError(f"holdout_size must be at least 1, got {holdout_size}")
    size = num_classes**holdout_size  # exact int arithmetic; cannot overflow
    if size > ENUMERATION_LIMIT:
        raise CapacityLimitError(num_classes, holdout_size, ENUMERATION_LIMIT)
    return size


def labeling_to_index(labeling, num_classes: int) -> int:
    """Lexicographic index of a labeling (big-endian base-C digits)."""
    index = 0
    length = 0
    for digit in labeling:
        digit = int(digit)
        if not 0 <= digit < num_classes:
            raise ValueError(
                f"labeling digit {digit} out of range for {num_classes} classes"
            )
        index = index * num_classes + digit
        length += 1
    if length == 0:
        raise ValueError("labeling must be non-empty")
    return index


def index_to_labeling(index: int, num_classes: int, holdout_size: int) -> tuple[int, ...]:
    """Inverse of :func:`labeling_to_index` for a holdout of known size."""
    if holdout_size < 1:
        raise ValueError(f"holdout_size must be at least 1, got {holdout_size}")
    space = num_classes**holdout_size
    if not 0 <= index < space:
        raise ValueError(f"index {index} out of range [0, {space})")
    digits = []
    for _ in range(holdout_size):
        index, rem = divmod(index, num_classes)
        digits.append(rem)
    return tuple(reversed(digits))


@dataclass(frozen=True)
class SimplexVector:
    """A distribution over all C**N' labelings of an N'-point holdout."""

    probs: np.ndarray
    num_classes: int
    holdout_size: int

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64, copy=True)
        expected = self.num_classes**self.holdout_size
        if probs.ndim != 1 or probs.shape[0] != expected:
            raise ValueError(
                f"probs must have length {self.num_classes}**{self.holdout_size} = "
                f"{expected}, got shape {probs.shape}"
            )
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise ValueError("probs must be non-negative and finite")
        if abs(float(probs.sum()) - 1.0) > 1e-9:
            raise ValueError(f"probs must sum to 1 within 1e-9, got {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True)
class LDMatrix:
    """K simplex columns over a shared labeling space, with their seeds."""

    columns: tuple[SimplexVector, ...]
    column_seeds: tuple[int, ...]

    def __post_init__(self):
        columns = tuple(self.columns)
        seeds = tuple(int(s) for s in self.column_seeds)
        if not columns:
            raise ValueError("an LDM needs at least one column")
        if len(seeds) != len(columns):
            raise ValueError(
                f"got {len(seeds)} seeds for {len(columns)} columns"
            )
        first = columns[0]
        for col in columns[1:]:
            if (
                col.num_classes != first.num_classes
                or col.holdout_size != first.holdout_size
            ):
                raise ValueError("all columns must share (num_classes, holdout_size)")
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "column_seeds", seeds)

    @property
    def num_classes(self) -> int:
        return self.columns[0].num_classes

    @property
    def holdout_size(self) -> int:
        return self.columns[0].holdout_size

    @property
    def k_columns(self) -> int:
        return len(self.columns)

    @property
    def matrix(self) -> np.ndarray:
        """The C**N' x K matrix of columns."""
        return np.column_stack([col.probs for col in self.columns])


def simplex_vector(
    model: TrainedModel, holdout_features, epsilon: float = DEFAULT_EPSILON
) -> SimplexVector:
    """The model-induced distribution over all labelings of the holdout rows.

    Built as the Kronecker product of the per-point probability rows (first
    point most significant), which realizes the per-entry product
    ``prod_j predict_proba(z_j)[l_j]`` for every labeling at once.  Epsilon
    smoothing then shifts every entry by ``epsilon`` and renormalizes; pass
    ``epsilon=0.0`` for the raw product distribution.
    """
    holdout = np.asarray(holdout_features, dtype=np.float64)
    if holdout.ndim != 2 or holdout.shape[0] < 1:
        raise ValueError(f"holdout_features must be a non-empty matrix, got {holdout.shape}")
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    _check_space(model.num_classes, holdout.shape[0])
    rows = model.predict_proba_batch(holdout)
    raw = reduce(np.kron, rows)
    smoothed = raw + epsilon
    smoothed /= smoothed.sum()
    return SimplexVector(
        probs=smoothed, num_classes=model.num_classes, holdout_size=holdout.shape[0]
    )


def ldm_column(
    spec: ClassifierSpec,
    train: LabeledDataset,
    holdout_features,
    seed: int,
    epsilon: float = DEFAULT_EPSILON,
) -> SimplexVector:
    """One LDM column: permute the train labels, fit, and read the simplex.

    Self-contained given its seed, so columns can be computed in any order —
    or concurrently — without changing the result.
    """
    rng = np.random.default_rng(seed)
    model = fit(spec, permute_labels(train, rng), rng)
    return simplex_vector(model, holdout_features, epsilon)


def build_ldm(
    spec: ClassifierSpec,
    ds: LabeledDataset,
    k_columns: int = 100,
    holdout_size: int = 5,
    master_seed: int = 0,
) -> LDMatrix:
    """Build a labeling-distribution matrix for one classifier spec.

    The holdout is drawn once from the master seed and shared by every
    column; column ``i`` then trains on labels permuted by its own derived
    seed.  Tree-based specs get the depth-5 pipeline default unless the spec
    sets a depth explicitly.
    """
    if k_columns < 1:
        raise ValueError(f"k_columns must be at least 1, got {k_columns}")
    _check_space(ds.num_classes, holdout_size)
    split = split_train_holdout(ds, holdout_size, make_rng(master_seed, "holdout"))
    resolved = with_defaults(spec, "ldm")
    seeds = tuple(derive_seed(master_seed, "column", i) for i in range(k_columns))
    columns = tuple(
        ldm_column(resolved, split.train, split.holdout_features, seed)
        for seed in seeds
    )
    return LDMatrix(columns=columns, column_seeds=seeds)


def write_ldm_csv(ldm: LDMatrix, path: str | Path) -> None:
    """Write the matrix as CSV: header ``col_0..col_{K-1}``, row r = labeling index r.

    Values carry 17 significant digits, enough to reproduce every float64
    exactly.
    """
    matrix = ldm.matrix
    header = ",".join(f"col_{i}" for i in range(ldm.k_columns))
    lines = [header]
    for row in matrix:
        lines.append(",".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
