"""Penalty weight selection and data splitting protocols.

The candidate grid is {2^-10, ..., 2^10}. Selection minimizes
misclassification error on a hold-out set or across stratified
cross-validation folds; ties prefer the larger (more regularized) lambda.

Fold and part assignment is stratified per class and keyed on the seed and
the row contents, not the row order: rows are ranked by a canonical
lexicographic order before the seeded shuffle, so permuting a dataset's
rows changes nothing about the resulting splits or the selection.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .datasets import LabeledDataset
from .errors import InsufficientDataError
from .linear_model import FitConfig, fit
from .metrics import error_rate
from .simplex import SimplexCode
from .util import derived_rng

__all__ = [
    "TuningResult",
    "lambda_grid",
    "select_holdout",
    "cv_select",
    "split_six",
]


def lambda_grid() -> np.ndarray:
    """The 21 candidate penalty weights 2^-10 .. 2^10, ascending."""
    return 2.0 ** np.arange(-10, 11, dtype=float)


@dataclass
class TuningResult:
    grid: np.ndarray
    errors: np.ndarray
    selected_lambda: float
    selected_by: str

    def trace_rows(self) -> list[tuple[float, float]]:
        return [(float(l), float(e)) for l, e in zip(self.grid, self.errors)]


def _select_index(errors: np.ndarray) -> int:
    # ascending grid scan with <= keeps the largest lambda among ties
    best = 0
    for i in range(1, len(errors)):
        if errors[i] <= errors[best]:
            best = i
    return best


def select_holdout(
    train: LabeledDataset, tune: LabeledDataset, base_config: FitConfig, code: SimplexCode
) -> TuningResult:
    """Fit once per grid value on ``train``; pick the smallest ``tune`` error."""
    if train.n == 0 or tune.n == 0:
        raise InsufficientDataError("train and tune sets must be non-empty")
    if train.p != tune.p:
        raise ValueError(f"train and tune feature counts differ: {train.p} vs {tune.p}")
    grid = lambda_grid()
    errors = np.empty(len(grid))
    for i, lam in enumerate(grid):
        model = fit(train, replace(base_config, lambda_=float(lam)), code)
        errors[i] = error_rate(model.predict(tune.X), tune.y)
    best = _select_index(errors)
    return TuningResult(grid, errors, float(grid[best]), "holdout")


def _canonical_order(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row ranking by (label, feature values), invariant to row permutation."""
    keys = tuple(X[:, j] for j in range(X.shape[1] - 1, -1, -1)) + (y,)
    return np.lexsort(keys)


def _stratified_parts(X: np.ndarray, y: np.ndarray, n_parts: int, seed: int) -> np.ndarray:
    """Per-row part index in 0..n_parts-1, stratified by class."""
    order = _canonical_order(X, y)
    part_of = np.empty(len(y), dtype=int)
    for c in np.unique(y):
        members = order[y[order] == c]
        perm = derived_rng(seed, int(c)).permutation(members.size)
        part_of[members[perm]] = np.arange(members.size) % n_parts
    return part_of


def cv_select(
    data: LabeledDataset,
    base_config: FitConfig,
    code: SimplexCode,
    folds: int = 4,
    seed: int = 0,
) -> TuningResult:
    """Stratified k-fold selection minimizing mean fold error."""
    if folds < 2:
        raise ValueError("folds must be at least 2")
    if data.n < folds:
        raise InsufficientDataError(f"need at least {folds} observations for {folds} folds")
    part_of = _stratified_parts(data.X, data.y, folds, seed)
    order = _canonical_order(data.X, data.y)
    fold_sets = []
    for f in range(folds):
        held = order[part_of[order] == f]
        kept = order[part_of[order] != f]
        if held.size == 0:
            continue
        fold_sets.append((data.subset(kept), data.subset(held)))

    grid = lambda_grid()
    errors = np.empty(len(grid))
    for i, lam in enumerate(grid):
        cfg = replace(base_config, lambda_=float(lam))
        fold_errors = [
            error_rate(fit(tr, cfg, code).predict(te.X), te.y) for tr, te in fold_sets
        ]
        errors[i] = float(np.mean(fold_errors))
    best = _select_index(errors)
    return TuningResult(grid, errors, float(grid[best]), "cv")


def split_six(data: LabeledDataset, test_part: int, seed: int = 0):
    """Stratified partition into 6 near-equal parts; one part becomes the test set."""
    if not 1 <= test_part <= 6:
        raise ValueError(f"test_part must lie in 1..6, got {test_part}")
    if data.n < 6:
        raise InsufficientDataError(f"need at least 6 observations, got {data.n}")
    part_of = _stratified_parts(data.X, data.y, 6, seed)
    order = _canonical_order(data.X, data.y)
    held = order[part_of[order] == test_part - 1]
    kept = order[part_of[order] != test_part - 1]
    return data.subset(kept), data.subset(held)
