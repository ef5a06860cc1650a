import logging
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from setreach.domains.BoxDomain import box_forward_bounds
from setreach.exceptions import DimensionMismatchError, UnsupportedDimensionError
from setreach.interval.Activations import act_deriv_bounds
from setreach.interval.Box import Box
from setreach.interval.Interval import Interval, mul_bounds
from setreach.interval.IntervalMatrix import MAX_DET_DIM, IntervalMatrix, det_bounds, point_matmat_bounds

from .CellGrid import partition

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CertificationResult:
    """Interval determinant of the Jacobian over ``cell``; certified iff it excludes 0."""

    cell: Box
    det_interval: Interval

    @property
    def certified(self):
        return self.det_interval.excludes_zero()


@dataclass(frozen=True, eq=False)
class SubsetExtraction:
    """
    Split of a grid into certified interior cells (the homeomorphic subset A) and
    kept cells, whose union covers the closure of input minus A.
    """

    grid: object
    indices: np.ndarray
    det_lo: np.ndarray
    det_hi: np.ndarray
    certified_mask: np.ndarray
    interior_mask: np.ndarray
    square: bool = True
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self,
            "counts",
            {
                "total": int(self.indices.shape[0]),
                "certified": int(self.certified_mask.sum()),
                "certified_interior": int(self.a_mask.sum()),
                "kept": int(self.kept_mask.sum()),
            },
        )

    @property
    def a_mask(self):
        return self.certified_mask & self.interior_mask

    @property
    def kept_mask(self):
        return ~self.a_mask

    @property
    def certified_cells(self):
        return self.indices[self.certified_mask]

    @property
    def certified_interior_cells(self):
        return self.indices[self.a_mask]

    @property
    def kept_cells(self):
        return self.indices[self.kept_mask]

    @property
    def certified_fraction(self):
        return self.counts["certified"] / self.counts["total"]


def _check_certifiable(net, dim):
    if not net.is_square:
        raise UnsupportedDimensionError(
            f"certification needs a square network, got {net.input_dim} -> {net.output_dim}"
        )
    if net.input_dim > MAX_DET_DIM:
        raise UnsupportedDimensionError(
            f"certification supports up to {MAX_DET_DIM} dims, got {net.input_dim}"
        )
    if dim != net.input_dim:
        raise DimensionMismatchError(f"cell has {dim} dims, network expects {net.input_dim}")


def jacobian_bounds(net, lows, highs):
    """
    Enclose the Jacobian over a batch of cells.

    Pre-activation boxes come from an interval forward pass; then
    J = diag(f_L'(z_L)) W_L ... diag(f_1'(z_1)) W_1 is accumulated as interval
    matrices, each point W_l applied through a sign split.

    Returns:
        (jac_lo, jac_hi) of shape (N, output_dim, input_dim).
    """
    _, _, preactivations = box_forward_bounds(net, lows, highs, keep_preactivations=True)
    n_cells = preactivations[0][0].shape[0]
    jac_lo = np.broadcast_to(np.eye(net.input_dim), (n_cells, net.input_dim, net.input_dim))
    jac_hi = jac_lo
    for layer, (z_lo, z_hi) in zip(net.layers, preactivations):
        w_lo, w_hi = point_matmat_bounds(layer.weights, jac_lo, jac_hi)
        d_lo, d_hi = act_deriv_bounds(layer.activation, z_lo, z_hi)
        if layer.activation == "linear":
            jac_lo, jac_hi = w_lo, w_hi
        else:
            jac_lo, jac_hi = mul_bounds(d_lo[:, :, None], d_hi[:, :, None], w_lo, w_hi)
    return jac_lo, jac_hi


def jacobian_interval(net, cell):
    _check_certifiable(net, cell.dim)
    lo, hi = jacobian_bounds(net, cell.lo[None, :], cell.hi[None, :])
    return IntervalMatrix(lo[0], hi[0])


def certify_homeomorphism(net, cell):
    """
    Certify that ``net`` restricted to ``cell`` is a homeomorphism onto its image.

    A Jacobian determinant bounded away from zero over the whole cell is a
    sufficient (not necessary) condition; inconclusive enclosures stay uncertified.
    """
    jac = jacobian_interval(net, cell)
    lo, hi = det_bounds(jac.lo, jac.hi)
    result = CertificationResult(cell, Interval(float(lo), float(hi)))
    logger.debug(f"det over {cell}: {result.det_interval} certified={result.certified}")
    return result


def _det_chunk(net, lows, highs):
    jac_lo, jac_hi = jacobian_bounds(net, lows, highs)
    return det_bounds(jac_lo, jac_hi)


def certify_grid(net, grid, n_jobs=1, chunk_size=2048):
    """
    Determinant bounds for every cell of ``grid`` in row-major order.

    Returns:
        (det_lo, det_hi, certified) arrays of length len(grid).
    """
    _check_certifiable(net, grid.dim)
    lows, highs = grid.bounds()
    starts = range(0, lows.shape[0], chunk_size)
    if n_jobs == 1 or len(starts) == 1:
        parts = [_det_chunk(net, lows[s : s + chunk_size], highs[s : s + chunk_size]) for s in starts]
    else:
        parts = Parallel(n_jobs=n_jobs)(
            delayed(_det_chunk)(net, lows[s : s + chunk_size], highs[s : s + chunk_size])
            for s in starts
        )
    det_lo = np.concatenate([p[0] for p in parts])
    det_hi = np.concatenate([p[1] for p in parts])
    certified = (det_lo > 0.0) | (det_hi < 0.0)
    return det_lo, det_hi, certified


def extract_subset(net, input_box, counts, n_jobs=1, chunk_size=2048):
    """
    Classify the cells of a uniform grid over ``input_box``.

    A cell joins the homeomorphic subset A when it is certified and none of its
    faces lies on the boundary of the input (decided by index: 0 < i_k and
    i_k + 1 < counts_k for every k). Every other cell is kept for propagation.
    Non-square networks cannot be certified and keep every cell.
    """
    if input_box.is_degenerate():
        raise UnsupportedDimensionError(f"subset extraction needs a non-degenerate input, got {input_box}")
    grid = partition(input_box, counts)
    indices = grid.indices()
    interior = ~grid.touches_boundary(indices)

    if not net.is_square:
        logger.warning(
            f"Network {net} is not square; no cell can be certified, keeping all {len(grid)} cells"
        )
        nan = np.full(len(grid), np.nan)
        return SubsetExtraction(
            grid, indices, nan, nan.copy(), np.zeros(len(grid), dtype=bool), interior, square=False
        )

    det_lo, det_hi, certified = certify_grid(net, grid, n_jobs=n_jobs, chunk_size=chunk_size)
    extraction = SubsetExtraction(grid, indices, det_lo, det_hi, certified, interior)
    logger.info(
        "Subset extraction: {total} cells, {certified} certified, "
        "{certified_interior} in A, {kept} kept".format(**extraction.counts)
    )
    return extraction
