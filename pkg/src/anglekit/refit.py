"""Two-stage refit for probability estimation under heavy regularization.

Penalties large enough to generalize in high dimensions shrink the fitted
decision values toward zero, which drags the estimated probabilities toward
1/k even when the predicted labels stay accurate. The refit keeps the
stage-1 decision directions but restores their scale: the k-1 stage-1
decision values of each training point become the predictors of a second,
unpenalized fit, and probabilities are read off the composed model.

Stage 2 fits the scaled-identity member of the composed model family,
f2(z) = c * z + b, by minimizing the unpenalized empirical risk over the
scale c and the k-1 intercepts b. For k = 2 this is exactly the classic
binary refit (one slope, one intercept on the 1-dimensional decision
value); for k > 2 it is its direct generalization. Restricting stage 2 to
scale plus shift is what keeps it well posed: the unrestricted (k-1) x
(k-1) stage-2 coefficient matrix can linearly separate the derived
training set whenever stage 1 fits its own training data well, and its
unpenalized minimizer then diverges, saturating every estimated
probability at 0 or 1 and warping the decision regions around individual
training points. The scale-and-shift problem is jointly convex, leaves
the stage-1 decision boundary directions intact, and has a bounded
minimizer whenever the scaled stage-1 rule misclassifies at least one
training point. When even the scale direction is separable (for example a
perfectly separated training set), the solver stops at its iteration cap
and reports a separability flag instead of silently regularizing.

Stage-2 inputs are deliberately not standardized; the scale of the
stage-1 outputs is exactly the signal being restored. Internally the
scale coordinate is preconditioned by the root-mean-square stage-1
functional margin so that heavily shrunken inputs (where the restoring
scale is large) condition as well as mild ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset
from .linear_model import FitConfig, FitDiagnostics, LinearAngleModel, fit
from .losses import get_loss
from .probability import class_probabilities, probability_matrix
from .simplex import SimplexCode

__all__ = [
    "STAGE2_MAX_ITERATIONS",
    "STAGE2_TOLERANCE",
    "SEPARABLE_NORM_FLAG",
    "RefitDiagnostics",
    "RefitModel",
    "refit_fit",
    "refit_from_stage1",
    "refit_probabilities",
    "refit_probability_matrix",
    "refit_predict",
]

STAGE2_MAX_ITERATIONS = 5000
STAGE2_TOLERANCE = 1e-9  # the stage-2 problem is tiny; solve it tightly
SEPARABLE_NORM_FLAG = 1e6


@dataclass
class RefitDiagnostics:
    stage2_converged: bool
    stage2_coef_norm: float
    stage2_separable: bool


@dataclass
class RefitModel:
    """A penalized stage-1 model composed with an unpenalized stage-2 model."""

    stage1: LinearAngleModel
    stage2: LinearAngleModel
    diagnostics: RefitDiagnostics | None = None

    def __post_init__(self):
        if self.stage2.p != self.stage1.k - 1:
            raise ValueError(
                f"stage 2 must act on {self.stage1.k - 1} decision values, "
                f"got p={self.stage2.p}"
            )
        if self.stage2.lambda_ != 0.0 or self.stage2.penalty != "none":
            raise ValueError("stage 2 must be unpenalized")
        if self.stage2.k != self.stage1.k:
            raise ValueError("both stages must share the class count")
        if self.stage2.loss_id != self.stage1.loss_id:
            raise ValueError("both stages must share the loss")

    @property
    def k(self) -> int:
        return self.stage1.k

    @property
    def loss_id(self) -> str:
        return self.stage1.loss_id

    def decision_values(self, x: np.ndarray) -> np.ndarray:
        return self.stage2.decision_values(self.stage1.decision_values(x))

    def scores(self, x: np.ndarray) -> np.ndarray:
        return self.stage2.scores(self.stage1.decision_values(x))

    def predict(self, x: np.ndarray):
        return self.stage2.predict(self.stage1.decision_values(x))

    def probabilities(self, x: np.ndarray) -> np.ndarray:
        loss = get_loss(self.loss_id)
        U = self.scores(x)
        if U.ndim == 1:
            return class_probabilities(U, loss)
        return probability_matrix(U, loss)


def _fit_scale_and_intercepts(Z, y, loss, code: SimplexCode):
    """Minimize mean loss(c * <W_y, z> + <W_y, b>) over (c, b).

    Accelerated gradient descent with backtracking and momentum restart,
    matching the stage-1 solver's scheme. Starts at the identity (c=1,
    b=0), so the stage-2 training objective never exceeds stage 1's.
    """
    n = Z.shape[0]
    M = code.vertices[y - 1]
    s = (Z * M).sum(axis=1)
    rms = float(np.sqrt(np.mean(s * s)))
    scale = rms if rms > 0.0 else 1.0
    st = s / scale  # preconditioned scale coordinate

    def value(ct, b):
        return float(np.mean(loss.eval(ct * st + M @ b)))

    def gradient(ct, b):
        d = loss.deriv(ct * st + M @ b) / n
        return float(d @ st), M.T @ d

    def descent_step(ct, b, step):
        g_c, g_b = gradient(ct, b)
        fc = value(ct, b)
        while True:
            ctn = ct - step * g_c
            bn = b - step * g_b
            dc = ctn - ct
            db = bn - b
            lin = g_c * dc + float(g_b @ db)
            quad = dc * dc + float(db @ db)
            if value(ctn, bn) <= fc + lin + quad / (2.0 * step) + 1e-14 * max(1.0, abs(fc)):
                return ctn, bn, step
            step *= 0.5
            if step < 1e-18:
                return ct, b, step

    ct = scale  # c = 1: start from the stage-1 decision values as they are
    b = np.zeros(code.k - 1)
    ct_extra, b_extra = ct, b
    theta = 1.0
    step = 1.0
    obj = value(ct, b)
    converged = False
    iterations = 0
    for iterations in range(1, STAGE2_MAX_ITERATIONS + 1):
        ctn, bn, step = descent_step(ct_extra, b_extra, step)
        new_obj = value(ctn, bn)
        if new_obj > obj:
            theta = 1.0
            ctn, bn, step = descent_step(ct, b, step)
            new_obj = value(ctn, bn)
            if new_obj > obj:
                iterations -= 1
                break
        theta_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta * theta))
        w = (theta - 1.0) / theta_next
        ct_extra = ctn + w * (ctn - ct)
        b_extra = bn + w * (bn - b)
        theta = theta_next
        rel = abs(obj - new_obj) / max(1.0, abs(obj))
        ct, b, obj = ctn, bn, new_obj
        if rel < STAGE2_TOLERANCE:
            converged = True
            break

    diag = FitDiagnostics(converged, iterations, obj, np.asarray([obj]))
    return ct / scale, b, diag


def refit_from_stage1(
    stage1: LinearAngleModel, data: LabeledDataset, code: SimplexCode
) -> RefitModel:
    """Run stage 2 on the stage-1 decision values of ``data``."""
    derived = LabeledDataset(X=stage1.decision_values(data.X), y=data.y)
    loss = get_loss(stage1.loss_id)
    if derived.y.max() > code.k:
        raise ValueError(f"labels must lie in 1..{code.k}")
    c, b, diag = _fit_scale_and_intercepts(derived.X, derived.y, loss, code)
    dim = code.k - 1
    stage2 = LinearAngleModel(
        k=code.k,
        p=dim,
        loss_id=stage1.loss_id,
        penalty="none",
        lambda_=0.0,
        B=c * np.eye(dim),
        b0=b,
        feature_mean=np.zeros(dim),
        feature_scale=np.ones(dim),
        diagnostics=diag,
    )
    coef_norm = float(np.sqrt((stage2.B**2).sum()))
    diagnostics = RefitDiagnostics(
        stage2_converged=bool(diag.converged),
        stage2_coef_norm=coef_norm,
        stage2_separable=(not diag.converged) and coef_norm > SEPARABLE_NORM_FLAG,
    )
    return RefitModel(stage1=stage1, stage2=stage2, diagnostics=diagnostics)


def refit_fit(data: LabeledDataset, stage1_config: FitConfig, code: SimplexCode) -> RefitModel:
    """Fit stage 1 with its penalty, then the unpenalized stage 2."""
    stage1 = fit(data, stage1_config, code)
    return refit_from_stage1(stage1, data, code)


def refit_probabilities(model: RefitModel, x: np.ndarray) -> np.ndarray:
    return model.probabilities(x)


def refit_probability_matrix(model: RefitModel, X: np.ndarray) -> np.ndarray:
    return probability_matrix(np.atleast_2d(model.scores(X)), get_loss(model.loss_id))


def refit_predict(model: RefitModel, x: np.ndarray):
    return model.predict(x)
