import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from setreach.exceptions import DimensionMismatchError
from setreach.interval.Activations import act_bounds, activation_deriv, check_activation
from setreach.interval.Box import Box
from setreach.interval.rounding import DERIV_STEPS, UNIT_ROUNDOFF, gamma, round_down, round_outward, round_up

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Zonotope:
    """
    The set {c + G e + d : e in [-1, 1]^g, |d_i| <= error_i}.

    ``error`` is an axis-aligned radius that absorbs floating-point rounding of
    the transformers; it is zero for exactly built zonotopes.
    """

    center: np.ndarray
    generators: np.ndarray
    error: np.ndarray = None

    def __post_init__(self):
        center = np.array(self.center, dtype=float).reshape(-1)
        generators = np.array(self.generators, dtype=float)
        if generators.size == 0:
            generators = np.zeros((center.shape[0], 0))
        if generators.ndim != 2 or generators.shape[0] != center.shape[0]:
            raise DimensionMismatchError(
                f"generator matrix {generators.shape} does not match center of length {center.shape[0]}"
            )
        error = np.zeros_like(center) if self.error is None else np.array(self.error, dtype=float)
        if error.shape != center.shape or np.any(error < 0):
            raise DimensionMismatchError("error radius must be a non-negative vector like the center")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "error", error)

    @property
    def dim(self):
        return self.center.shape[0]

    @property
    def order(self):
        return self.generators.shape[1]

    def hull_bounds(self):
        g = self.order
        radius = np.abs(self.generators).sum(axis=1) * (1.0 + gamma(g + 1)) + self.error
        radius = round_up(radius)
        return round_down(self.center - radius), round_up(self.center + radius)

    def interval_hull(self):
        lo, hi = self.hull_bounds()
        return Box(lo, hi)

    def contains(self, points, tol=1e-9):
        """
        Exact membership of each point, decided by a linear feasibility problem
        over the generator coefficients.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dim:
            raise DimensionMismatchError(f"points of dim {points.shape[1]} vs zonotope dim {self.dim}")
        a_eq = np.hstack([self.generators, np.eye(self.dim)])
        bounds = [(-1.0, 1.0)] * self.order + [(-e - tol, e + tol) for e in self.error]
        cost = np.zeros(a_eq.shape[1])
        inside = []
        for p in points:
            result = linprog(cost, A_eq=a_eq, b_eq=p - self.center, bounds=bounds, method="highs")
            inside.append(result.status == 0)
        return np.array(inside)


def zono_from_box(cell):
    """Center at the midpoint, one axis generator per non-degenerate dim."""
    center = 0.5 * (cell.lo + cell.hi)
    radius = 0.5 * (cell.hi - cell.lo)
    active = np.flatnonzero(radius > 0)
    generators = np.zeros((cell.dim, active.size))
    generators[active, np.arange(active.size)] = radius[active]
    # Midpoint and half-width are each off by at most half an ulp.
    error = np.where(
        radius > 0,
        np.spacing(np.maximum(np.abs(cell.lo), np.abs(cell.hi))),
        0.0,
    )
    return Zonotope(center, generators, error)


def zono_affine(z, weights, bias):
    """Exact affine image W z + b; the rounding of W c and W G goes to ``error``."""
    weights = np.asarray(weights, dtype=float)
    bias = np.asarray(bias, dtype=float)
    if weights.shape[1] != z.dim:
        raise DimensionMismatchError(
            f"weights of shape {weights.shape} applied to a {z.dim}-dim zonotope"
        )
    abs_w = np.abs(weights)
    center = weights @ z.center + bias
    generators = weights @ z.generators
    k = weights.shape[1]
    magnitude = abs_w @ (np.abs(z.center) + np.abs(z.generators).sum(axis=1)) + np.abs(bias)
    error = (abs_w @ z.error) * (1.0 + gamma(k + 1)) + gamma(k + 2) * magnitude
    return Zonotope(center, generators, round_up(error))


def zono_activation(z, act):
    """
    Slope-and-offset transformer for sigmoid-shaped activations.

    Per dim with pre-activation hull [l, u]: slope lam = min(f'(l), f'(u)),
    g(x) = f(x) - lam x is non-decreasing on [l, u], so f(x) lies in
    lam x + mu1 +/- mu2 with mu1, mu2 the midpoint and radius of [g(l), g(u)].
    Each dim gains one fresh generator of size mu2.
    """
    check_activation(act)
    if act == "linear":
        return z
    deriv = activation_deriv(act)
    l, u = z.hull_bounds()
    lam = np.maximum(round_down(np.minimum(deriv(l), deriv(u)), DERIV_STEPS), 0.0)

    f_l, _ = act_bounds(act, l, l)
    _, f_u = act_bounds(act, u, u)
    _, lam_l_hi = round_outward(lam * l, lam * l)
    lam_u_lo, _ = round_outward(lam * u, lam * u)
    g_lo = round_down(f_l - lam_l_hi)
    g_hi = round_up(f_u - lam_u_lo)
    g_hi = np.maximum(g_hi, g_lo)

    mu1 = 0.5 * (g_lo + g_hi)
    mu2 = np.maximum(round_up(np.maximum(g_hi - mu1, mu1 - g_lo)), 0.0)

    center = lam * z.center + mu1
    scaled = lam[:, None] * z.generators
    magnitude = np.abs(lam * z.center) + np.abs(mu1) + np.abs(scaled).sum(axis=1)
    error = round_up(lam * z.error * (1.0 + 2 * UNIT_ROUNDOFF) + gamma(3) * magnitude)

    fresh_dims = np.flatnonzero(mu2 > 0)
    fresh = np.zeros((z.dim, fresh_dims.size))
    fresh[fresh_dims, np.arange(fresh_dims.size)] = mu2[fresh_dims]
    return Zonotope(center, np.hstack([scaled, fresh]), error)


def zono_propagate(net, cell):
    z = zono_from_box(cell)
    for layer in net.layers:
        z = zono_activation(zono_affine(z, layer.weights, layer.bias), layer.activation)
    return z
