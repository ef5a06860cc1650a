import logging
from dataclasses import dataclass

import numpy as np

from setreach.exceptions import DimensionMismatchError, SetReachError
from setreach.interval.Box import Box
from setreach.network.Network import forward_batch
from setreach.network.generate import philox_stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    points: np.ndarray
    images: np.ndarray
    image_hull: Box
    violations: np.ndarray

    @property
    def violation_points(self):
        return self.points[self.violations]

    @property
    def n_violations(self):
        return int(self.violations.size)


def sample_box(region, n, seed=0):
    """
    ``n`` uniform points in ``region`` from a Philox stream keyed by ``seed``.

    Degenerate dims stay pinned to their single value.
    """
    if n < 1:
        raise SetReachError(f"sample count must be >= 1, got {n}")
    rng = philox_stream(seed)
    unit = rng.random((int(n), region.dim))
    points = region.lo + unit * (region.hi - region.lo)
    return np.clip(points, region.lo, region.hi)


def outside_mask(images, safe):
    return np.any((images < safe.lo) | (images > safe.hi), axis=1)


def monte_carlo(net, region, n, seed=0, safe=None):
    """
    Sample the network over ``region`` and report the image hull.

    With a ``safe`` box the indices of samples whose image leaves it are
    returned as ``violations``.
    """
    if region.dim != net.input_dim:
        raise DimensionMismatchError(f"region has {region.dim} dims, network expects {net.input_dim}")
    if safe is not None and safe.dim != net.output_dim:
        raise DimensionMismatchError(f"safe set has {safe.dim} dims, network outputs {net.output_dim}")
    points = sample_box(region, n, seed)
    images = forward_batch(net, points)
    hull = Box(images.min(axis=0), images.max(axis=0))
    if safe is None:
        violations = np.empty(0, dtype=int)
    else:
        violations = np.flatnonzero(outside_mask(images, safe))
    logger.debug(f"Monte-Carlo: {n} samples, {violations.size} outside the safe set")
    return MonteCarloResult(points, images, hull, violations)
