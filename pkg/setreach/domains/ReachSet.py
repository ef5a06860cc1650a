import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from joblib import Parallel, delayed

from setreach.exceptions import DimensionMismatchError, SetReachError
from setreach.interval.Box import Box

from .BoxDomain import box_forward_bounds, box_propagate
from .Zonotope import Zonotope, zono_propagate

logger = logging.getLogger(__name__)


class Domain(str, Enum):
    BOX = "box"
    ZONOTOPE = "zonotope"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"box": cls.BOX, "interval": cls.BOX, "zonotope": cls.ZONOTOPE, "zono": cls.ZONOTOPE}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise SetReachError(f"unknown abstract domain '{value}', expected box or zonotope") from None


@dataclass(frozen=True, eq=False)
class ReachSet:
    """Over-approximation of the image of ``source_cell`` in one abstract domain."""

    domain: Domain
    payload: object
    source_cell: Box

    def hull(self):
        if isinstance(self.payload, Zonotope):
            return self.payload.interval_hull()
        return self.payload

    @property
    def dim(self):
        return self.payload.dim


def propagate(net, cell, domain):
    domain = Domain.parse(domain)
    if cell.dim != net.input_dim:
        raise DimensionMismatchError(
            f"cell has {cell.dim} dims, network expects {net.input_dim}"
        )
    if domain is Domain.BOX:
        payload = box_propagate(net, cell)
    else:
        payload = zono_propagate(net, cell)
    return ReachSet(domain, payload, cell)


def _zonotope_hulls(net, lows, highs):
    out_lo = np.empty((lows.shape[0], net.output_dim))
    out_hi = np.empty_like(out_lo)
    for i, (lo, hi) in enumerate(zip(lows, highs)):
        out_lo[i], out_hi[i] = zono_propagate(net, Box(lo, hi)).hull_bounds()
    return out_lo, out_hi


def _box_hulls(net, lows, highs):
    out_lo, out_hi, _ = box_forward_bounds(net, lows, highs)
    return out_lo, out_hi


def propagate_cells(net, lows, highs, domain, n_jobs=1, chunk_size=2048):
    """
    Propagate many cells and return their output hulls.

    Args:
        lows, highs: Cell bounds of shape (N, input_dim).
        domain: Abstract domain tag.
        n_jobs: joblib worker count; chunks are merged back in input order.
        chunk_size: Cells per task (and per vectorised box batch).

    Returns:
        (out_lo, out_hi) of shape (N, output_dim).
    """
    domain = Domain.parse(domain)
    lows = np.atleast_2d(np.asarray(lows, dtype=float))
    highs = np.atleast_2d(np.asarray(highs, dtype=float))
    if lows.shape[1] != net.input_dim:
        raise DimensionMismatchError(
            f"cells of dim {lows.shape[1]} for a network with {net.input_dim} inputs"
        )
    if lows.shape[0] == 0:
        return np.empty((0, net.output_dim)), np.empty((0, net.output_dim))

    worker = _box_hulls if domain is Domain.BOX else _zonotope_hulls
    if domain is Domain.ZONOTOPE:
        chunk_size = max(1, min(chunk_size, -(-lows.shape[0] // max(n_jobs, 1))))
    starts = range(0, lows.shape[0], chunk_size)
    logger.debug(f"Propagating {lows.shape[0]} cells ({domain.value}) in {len(starts)} chunk(s)")
    if n_jobs == 1 or len(starts) == 1:
        parts = [worker(net, lows[s : s + chunk_size], highs[s : s + chunk_size]) for s in starts]
    else:
        parts = Parallel(n_jobs=n_jobs)(
            delayed(worker)(net, lows[s : s + chunk_size], highs[s : s + chunk_size]) for s in starts
        )
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
