"""Margin losses and their derivatives.

Both shipped losses are convex, non-increasing and continuously
differentiable with a strictly negative derivative everywhere, which the
probability link 1/l'(u) requires. Functions accept scalars or arrays and
reject non-finite input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "LossFunction",
    "get_loss",
    "register_loss",
    "known_losses",
    "logistic_eval",
    "logistic_deriv",
    "soft_lum_eval",
    "soft_lum_deriv",
]

_EXP_SWITCH = 30.0  # beyond this, exp-based formulas switch to asymptotic branches


def _as_finite(u) -> np.ndarray:
    a = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("margin values must be finite")
    return a


def _maybe_scalar(out: np.ndarray, template: np.ndarray):
    return float(out) if template.ndim == 0 else out


def logistic_eval(u):
    """Deviance loss log(1 + exp(-u)), overflow-safe for large |u|."""
    a = _as_finite(u)
    x = np.atleast_1d(a)
    out = np.empty_like(x)
    hi = x > _EXP_SWITCH
    lo = x < -_EXP_SWITCH
    mid = ~(hi | lo)
    out[hi] = np.exp(-x[hi])
    out[lo] = -x[lo] + np.exp(x[lo])
    out[mid] = np.log1p(np.exp(-x[mid]))
    return _maybe_scalar(out.reshape(a.shape), a)


def logistic_deriv(u):
    """Derivative -1 / (1 + exp(u)) of the deviance loss."""
    a = _as_finite(u)
    x = np.atleast_1d(a)
    out = np.empty_like(x)
    hi = x > _EXP_SWITCH
    out[hi] = -np.exp(-x[hi])
    out[~hi] = -1.0 / (1.0 + np.exp(x[~hi]))
    return _maybe_scalar(out.reshape(a.shape), a)


def soft_lum_eval(u):
    """Soft large-margin unified machine loss: 1 - u below zero, 1/(1+u) above."""
    a = _as_finite(u)
    x = np.atleast_1d(a)
    out = np.empty_like(x)
    neg = x < 0.0
    out[neg] = 1.0 - x[neg]
    out[~neg] = 1.0 / (1.0 + x[~neg])
    return _maybe_scalar(out.reshape(a.shape), a)


def soft_lum_deriv(u):
    """Derivative of the soft loss: -1 below zero, -1/(1+u)^2 above."""
    a = _as_finite(u)
    x = np.atleast_1d(a)
    out = np.empty_like(x)
    neg = x < 0.0
    out[neg] = -1.0
    out[~neg] = -1.0 / (1.0 + x[~neg]) ** 2
    return _maybe_scalar(out.reshape(a.shape), a)


@dataclass(frozen=True)
class LossFunction:
    """A margin loss: an identifier plus value and derivative maps."""

    identifier: str
    eval: Callable
    deriv: Callable

    def at_zero(self) -> float:
        return float(self.eval(0.0))


LOGISTIC = LossFunction("logistic", logistic_eval, logistic_deriv)
SOFT_LUM = LossFunction("soft", soft_lum_eval, soft_lum_deriv)

_REGISTRY: dict[str, LossFunction] = {
    LOGISTIC.identifier: LOGISTIC,
    SOFT_LUM.identifier: SOFT_LUM,
}


def get_loss(identifier: str) -> LossFunction:
    """Look up a loss by its string identifier ('logistic' or 'soft')."""
    try:
        return _REGISTRY[identifier]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise ValueError(f"unknown loss {identifier!r}; known losses: {known}") from None


def register_loss(loss: LossFunction) -> None:
    """Register an additional loss under its identifier."""
    if loss.identifier in _REGISTRY:
        raise ValueError(f"loss {loss.identifier!r} is already registered")
    _REGISTRY[loss.identifier] = loss


def known_losses() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))
