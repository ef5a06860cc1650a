import numpy as np
from scipy.special import expit

from setreach.exceptions import UnknownActivationError

from .Interval import Interval
from .rounding import DERIV_STEPS, LIBM_STEPS, round_down, round_up

ACTIVATIONS = ("tanh", "sigmoid", "linear")


def _tanh_deriv(x):
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(x) ** 2


def _sigmoid_deriv(x):
    return expit(x) * expit(-x)


def _identity(x):
    return np.asarray(x, dtype=float)


def _ones(x):
    return np.ones_like(np.asarray(x, dtype=float))


# tag -> (function, derivative, range of the function, maximum of the derivative)
_REGISTRY = {
    "tanh": (np.tanh, _tanh_deriv, (-1.0, 1.0), 1.0),
    "sigmoid": (expit, _sigmoid_deriv, (0.0, 1.0), 0.25),
    "linear": (_identity, _ones, (-np.inf, np.inf), 1.0),
}


def check_activation(act):
    if act not in _REGISTRY:
        raise UnknownActivationError(
            f"unknown activation '{act}', expected one of {', '.join(ACTIVATIONS)}"
        )
    return act


def activation_fn(act):
    return _REGISTRY[check_activation(act)][0]


def activation_deriv(act):
    return _REGISTRY[check_activation(act)][1]


def act_bounds(act, lo, hi):
    """
    Enclose act over the boxes [lo, hi] (arrays of any shape).

    All supported activations are monotone increasing, so the endpoints map to
    the endpoints.
    """
    fn, _, (floor, ceiling), _ = _REGISTRY[check_activation(act)]
    if act == "linear":
        return np.array(lo, dtype=float), np.array(hi, dtype=float)
    out_lo = np.maximum(round_down(fn(lo), LIBM_STEPS), floor)
    out_hi = np.minimum(round_up(fn(hi), LIBM_STEPS), ceiling)
    return out_lo, out_hi


def act_deriv_bounds(act, lo, hi):
    """
    Enclose act' over the boxes [lo, hi].

    tanh' and sigmoid' are even and unimodal with their peak at 0: the minimum
    sits at an endpoint, the maximum at 0 when 0 is inside, otherwise at the
    endpoint closer to 0.
    """
    _, deriv, _, peak = _REGISTRY[check_activation(act)]
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if act == "linear":
        return np.ones_like(lo), np.ones_like(hi)
    at_lo = deriv(lo)
    at_hi = deriv(hi)
    spans_zero = (lo <= 0.0) & (hi >= 0.0)
    out_lo = np.maximum(round_down(np.minimum(at_lo, at_hi), DERIV_STEPS), 0.0)
    out_hi = np.where(
        spans_zero, peak, np.minimum(round_up(np.maximum(at_lo, at_hi), DERIV_STEPS), peak)
    )
    return out_lo, out_hi


def act_range(act, x):
    lo, hi = act_bounds(act, x.lo, x.hi)
    return Interval(float(lo), float(hi))


def act_deriv_range(act, x):
    lo, hi = act_deriv_bounds(act, x.lo, x.hi)
    return Interval(float(lo), float(hi))
