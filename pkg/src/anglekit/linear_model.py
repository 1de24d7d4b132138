"""Penalized linear angle-based classifier.

The model is f(x) = B^T x + b0 with B of shape (p, k-1). Training minimizes

    (1/n) sum_i loss(<W_{y_i}, B^T x_i + b0>) + lambda * J(B)

where J is the entrywise L1 norm or the squared L2 norm of B. Intercepts
are never penalized. The solver is accelerated proximal gradient descent
with backtracking line search; momentum is restarted whenever the
extrapolated step would increase the objective, so the sequence of
accepted objective values is non-increasing. The L1 term enters only
through its proximal map (entrywise soft thresholding); the ridge term is
folded into the smooth gradient.

Starting from the zero model, monotonicity gives the norm bound
lambda * J(B_hat) <= loss(0) for every fit, which is what makes heavily
penalized decision values (and hence estimated probabilities) shrink.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .datasets import LabeledDataset
from .errors import DataValidationError, InsufficientDataError
from .losses import LossFunction, get_loss
from .simplex import SimplexCode, simplex_vertices

__all__ = [
    "PENALTIES",
    "FitConfig",
    "FitDiagnostics",
    "LinearAngleModel",
    "penalty_value",
    "objective",
    "smooth_gradient",
    "fit",
]

PENALTIES = ("none", "l1", "l2")


@dataclass
class FitConfig:
    """Solver and objective settings for a single fit.

    ``seed`` is reserved for randomized warm starts; the default
    initialization is the zero model, so it has no effect out of the box.
    """

    loss_id: str = "logistic"
    penalty: str = "none"
    lambda_: float = 0.0
    max_iterations: int = 2000
    gradient_tolerance: float = 1e-6
    line_search_shrink: float = 0.5
    standardize: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.penalty not in PENALTIES:
            raise ValueError(f"penalty must be one of {PENALTIES}, got {self.penalty!r}")
        if self.lambda_ < 0:
            raise ValueError("lambda must be nonnegative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0.0 < self.line_search_shrink < 1.0:
            raise ValueError("line_search_shrink must lie in (0, 1)")


@dataclass
class FitDiagnostics:
    converged: bool
    n_iterations: int
    final_objective: float
    objective_trace: np.ndarray = field(repr=False)


@dataclass
class LinearAngleModel:
    """Fitted linear classifier with its stored feature standardization."""

    k: int
    p: int
    loss_id: str
    penalty: str
    lambda_: float
    B: np.ndarray
    b0: np.ndarray
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    diagnostics: FitDiagnostics | None = None

    def __post_init__(self):
        self.B = np.asarray(self.B, dtype=float)
        self.b0 = np.asarray(self.b0, dtype=float)
        self.feature_mean = np.asarray(self.feature_mean, dtype=float)
        self.feature_scale = np.asarray(self.feature_scale, dtype=float)
        if self.B.shape != (self.p, self.k - 1):
            raise ValueError(f"B must have shape ({self.p}, {self.k - 1}), got {self.B.shape}")
        if self.b0.shape != (self.k - 1,):
            raise ValueError(f"b0 must have shape ({self.k - 1},), got {self.b0.shape}")
        if self.feature_mean.shape != (self.p,) or self.feature_scale.shape != (self.p,):
            raise ValueError("standardization vectors must have one entry per feature")
        for name, arr in (("B", self.B), ("b0", self.b0)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")

    @property
    def code(self) -> SimplexCode:
        return simplex_vertices(self.k)

    def decision_values(self, x: np.ndarray) -> np.ndarray:
        """f(x) = B^T z + b0 on the standardized features z."""
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        X2 = np.atleast_2d(X)
        if X2.shape[1] != self.p:
            raise ValueError(f"expected {self.p} features, got {X2.shape[1]}")
        Z = (X2 - self.feature_mean) / self.feature_scale
        F = Z @ self.B + self.b0
        return F[0] if single else F

    def scores(self, x: np.ndarray) -> np.ndarray:
        """Vertex scores <W_j, f(x)> for each class."""
        F = self.decision_values(x)
        U = np.atleast_2d(F) @ self.code.vertices.T
        return U[0] if np.asarray(x).ndim == 1 else U

    def predict(self, x: np.ndarray):
        """Class label(s) with the largest vertex score; ties to the smallest index."""
        U = np.atleast_2d(self.scores(x))
        labels = np.argmax(U, axis=1) + 1
        return int(labels[0]) if np.asarray(x).ndim == 1 else labels


def penalty_value(B: np.ndarray, penalty: str) -> float:
    """J(B): entrywise L1 norm, squared L2 norm, or zero."""
    if penalty == "l1":
        return float(np.abs(B).sum())
    if penalty == "l2":
        return float((B * B).sum())
    if penalty == "none":
        return 0.0
    raise ValueError(f"penalty must be one of {PENALTIES}, got {penalty!r}")


def _validated_arrays(data: LabeledDataset, code: SimplexCode):
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=int)
    if X.shape[0] == 0:
        raise DataValidationError("dataset is empty")
    if not np.all(np.isfinite(X)):
        raise DataValidationError("features contain non-finite values")
    if y.min() < 1 or y.max() > code.k:
        raise DataValidationError(f"labels must lie in 1..{code.k}")
    return X, y


def _margins(X, y, B, b0, code):
    M = code.vertices[y - 1]
    F = X @ B + b0
    return (F * M).sum(axis=1), M


def objective(B, b0, data: LabeledDataset, config: FitConfig, code: SimplexCode) -> float:
    """Penalized empirical risk of the parameters on the data as given."""
    X, y = _validated_arrays(data, code)
    loss = get_loss(config.loss_id)
    u, _ = _margins(X, y, np.asarray(B, float), np.asarray(b0, float), code)
    value = float(np.mean(loss.eval(u)))
    if config.lambda_ > 0:
        value += config.lambda_ * penalty_value(B, config.penalty)
    return value


def smooth_gradient(B, b0, data: LabeledDataset, config: FitConfig, code: SimplexCode):
    """Gradient of the smooth objective part (loss term, plus ridge when l2).

    The L1 term is handled by the proximal step and is never differentiated.
    """
    X, y = _validated_arrays(data, code)
    loss = get_loss(config.loss_id)
    B = np.asarray(B, float)
    u, M = _margins(X, y, B, np.asarray(b0, float), code)
    G = (loss.deriv(u) / X.shape[0])[:, None] * M
    grad_B = X.T @ G
    if config.penalty == "l2" and config.lambda_ > 0:
        grad_B = grad_B + 2.0 * config.lambda_ * B
    return grad_B, G.sum(axis=0)


def _soft_threshold(A: np.ndarray, t: float) -> np.ndarray:
    return np.sign(A) * np.maximum(np.abs(A) - t, 0.0)


def fit(data: LabeledDataset, config: FitConfig, code: SimplexCode) -> LinearAngleModel:
    """Minimize the penalized empirical risk and return the fitted model.

    Non-convergence within ``max_iterations`` is reported through the model
    diagnostics, not raised.
    """
    X, y = _validated_arrays(data, code)
    n, p = X.shape
    if n < code.k:
        raise InsufficientDataError(f"need at least {code.k} observations, got {n}")
    loss = get_loss(config.loss_id)

    if config.standardize:
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0.0] = 1.0  # constant features pass through unscaled
    else:
        mean = np.zeros(p)
        scale = np.ones(p)
    Z = (X - mean) / scale

    B, b0, diag = _accelerated_proximal_fit(Z, y, code, loss, config)
    return LinearAngleModel(
        k=code.k,
        p=p,
        loss_id=config.loss_id,
        penalty=config.penalty,
        lambda_=config.lambda_,
        B=B,
        b0=b0,
        feature_mean=mean,
        feature_scale=scale,
        diagnostics=diag,
    )


def _accelerated_proximal_fit(X, y, code, loss: LossFunction, cfg: FitConfig):
    n, p = X.shape
    dim = code.k - 1
    M = code.vertices[y - 1]
    lam = cfg.lambda_
    use_l1 = cfg.penalty == "l1" and lam > 0
    use_l2 = cfg.penalty == "l2" and lam > 0

    def smooth(B, b0):
        u = ((X @ B + b0) * M).sum(axis=1)
        v = float(np.mean(loss.eval(u)))
        if use_l2:
            v += lam * float((B * B).sum())
        return v

    def total(B, b0):
        v = smooth(B, b0)
        if use_l1:
            v += lam * float(np.abs(B).sum())
        return v

    def gradient(B, b0):
        u = ((X @ B + b0) * M).sum(axis=1)
        v = float(np.mean(loss.eval(u)))
        G = (loss.deriv(u) / n)[:, None] * M
        gB = X.T @ G
        if use_l2:
            v += lam * float((B * B).sum())
            gB = gB + 2.0 * lam * B
        return gB, G.sum(axis=0), v

    def prox_step(Bc, b0c, step):
        # backtracked proximal gradient step; the acceptance test is the
        # standard quadratic majorization bound, so the accepted point can
        # never increase the full objective relative to (Bc, b0c)
        gB, gb0, fc = gradient(Bc, b0c)
        while True:
            Bn = Bc - step * gB
            if use_l1:
                Bn = _soft_threshold(Bn, step * lam)
            b0n = b0c - step * gb0
            dB = Bn - Bc
            db0 = b0n - b0c
            lin = float((gB * dB).sum() + (gb0 * db0).sum())
            quad = float((dB * dB).sum() + (db0 * db0).sum())
            bound = fc + lin + quad / (2.0 * step) + 1e-12 * max(1.0, abs(fc))
            if smooth(Bn, b0n) <= bound:
                return Bn, b0n, step
            step *= cfg.line_search_shrink
            if step < 1e-18:
                return Bc, b0c, step

    B = np.zeros((p, dim))
    b0 = np.zeros(dim)
    B_extra, b0_extra = B, b0
    theta = 1.0
    step = 1.0
    obj = total(B, b0)
    trace = [obj]
    converged = False
    iterations = 0

    for iterations in range(1, cfg.max_iterations + 1):
        Bn, b0n, step = prox_step(B_extra, b0_extra, step)
        new_obj = total(Bn, b0n)
        if new_obj > obj:
            # extrapolation overshot: restart momentum from the current iterate
            theta = 1.0
            Bn, b0n, step = prox_step(B, b0, step)
            new_obj = total(Bn, b0n)
            if new_obj > obj:
                iterations -= 1
                break
        theta_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta * theta))
        w = (theta - 1.0) / theta_next
        B_extra = Bn + w * (Bn - B)
        b0_extra = b0n + w * (b0n - b0)
        theta = theta_next
        rel = abs(obj - new_obj) / max(1.0, abs(obj))
        B, b0, obj = Bn, b0n, new_obj
        trace.append(obj)
        if rel < cfg.gradient_tolerance:
            converged = True
            break

    return B, b0, FitDiagnostics(converged, iterations, obj, np.asarray(trace))
