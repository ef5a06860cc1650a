from dataclasses import dataclass

import numpy as np

from setreach.exceptions import DimensionMismatchError, UnsupportedDimensionError

from .Interval import Interval, add_bounds, check_bounds, mul_bounds, neg_bounds
from .rounding import gamma, round_down, round_up

# Cofactor expansion is exact in the interval sense but grows like 2^n minors;
# larger determinants are rejected instead of silently loosened.
MAX_DET_DIM = 6


def matmul_bounds(alo, ahi, blo, bhi):
    """
    Interval matrix product over the last two axes, broadcasting leading axes.

    Shapes: (..., r, k) times (..., k, c) -> (..., r, c).
    """
    alo = np.asarray(alo, dtype=float)[..., :, :, None]
    ahi = np.asarray(ahi, dtype=float)[..., :, :, None]
    blo = np.asarray(blo, dtype=float)[..., None, :, :]
    bhi = np.asarray(bhi, dtype=float)[..., None, :, :]
    products = np.stack(
        np.broadcast_arrays(alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    )
    pmin = products.min(axis=0)
    pmax = products.max(axis=0)
    k = pmin.shape[-2]
    magnitude = np.maximum(np.abs(pmin), np.abs(pmax)).sum(axis=-2)
    err = gamma(k + 2) * magnitude
    return round_down(pmin.sum(axis=-2) - err), round_up(pmax.sum(axis=-2) + err)


def point_matvec_bounds(weights, lo, hi, bias=None):
    """
    Enclose ``weights @ x + bias`` for x ranging over interval vectors.

    ``lo``/``hi`` have shape (..., k); the result has shape (..., r). The point
    matrix is split by sign so each output endpoint is a single matmul.
    """
    weights = np.asarray(weights, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    w_pos = np.maximum(weights, 0.0)
    w_neg = np.minimum(weights, 0.0)
    k = weights.shape[1]
    out_lo = lo @ w_pos.T + hi @ w_neg.T
    out_hi = hi @ w_pos.T + lo @ w_neg.T
    magnitude = np.maximum(np.abs(lo), np.abs(hi)) @ np.abs(weights).T
    if bias is not None:
        bias = np.asarray(bias, dtype=float)
        out_lo = out_lo + bias
        out_hi = out_hi + bias
        magnitude = magnitude + np.abs(bias)
    err = gamma(k + 2) * magnitude
    return round_down(out_lo - err), round_up(out_hi + err)


def point_matmat_bounds(weights, lo, hi):
    """Enclose ``weights @ X`` for interval matrices X of shape (..., k, c)."""
    weights = np.asarray(weights, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    w_pos = np.maximum(weights, 0.0)
    w_neg = np.minimum(weights, 0.0)
    k = weights.shape[1]
    out_lo = w_pos @ lo + w_neg @ hi
    out_hi = w_pos @ hi + w_neg @ lo
    magnitude = np.abs(weights) @ np.maximum(np.abs(lo), np.abs(hi))
    err = gamma(k + 2) * magnitude
    return round_down(out_lo - err), round_up(out_hi + err)


def det_bounds(lo, hi):
    """
    Enclose det over the last two axes of a batch of interval matrices.

    Laplace expansion along successive rows; minors are memoised by their column
    set, so an n x n determinant costs about n * 2^(n-1) interval products per
    batch element instead of n!.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = lo.shape[-1]
    if lo.ndim < 2 or lo.shape[-2] != n:
        raise DimensionMismatchError(f"determinant needs square matrices, got {lo.shape}")
    if n > MAX_DET_DIM:
        raise UnsupportedDimensionError(
            f"interval determinant supports n <= {MAX_DET_DIM}, got {n}"
        )
    minors = {}

    def minor(cols):
        row = n - len(cols)
        if len(cols) == 1:
            return lo[..., row, cols[0]], hi[..., row, cols[0]]
        if cols in minors:
            return minors[cols]
        acc = None
        for pos, col in enumerate(cols):
            sub_lo, sub_hi = minor(cols[:pos] + cols[pos + 1 :])
            term = mul_bounds(lo[..., row, col], hi[..., row, col], sub_lo, sub_hi)
            if pos % 2:
                term = neg_bounds(*term)
            acc = term if acc is None else add_bounds(*acc, *term)
        minors[cols] = acc
        return acc

    return minor(tuple(range(n)))


@dataclass(frozen=True, eq=False)
class IntervalMatrix:
    """Rectangular matrix of closed intervals stored as endpoint arrays."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = check_bounds(self.lo, self.hi)
        if lo.ndim != 2:
            raise DimensionMismatchError(f"interval matrix must be 2-D, got {lo.shape}")
        lo, hi = lo.copy(), hi.copy()
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_point(cls, matrix):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        return cls(matrix, matrix)

    @classmethod
    def from_intervals(cls, rows):
        lo = [[entry.lo for entry in row] for row in rows]
        hi = [[entry.hi for entry in row] for row in rows]
        return cls(np.array(lo, dtype=float), np.array(hi, dtype=float))

    @classmethod
    def identity(cls, n):
        return cls.from_point(np.eye(n))

    @property
    def rows(self):
        return self.lo.shape[0]

    @property
    def cols(self):
        return self.lo.shape[1]

    @property
    def shape(self):
        return self.lo.shape

    def __getitem__(self, index):
        i, j = index
        return Interval(self.lo[i, j], self.hi[i, j])

    def entries(self):
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def contains(self, matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != self.shape:
            raise DimensionMismatchError(f"shape {matrix.shape} vs {self.shape}")
        return bool(np.all(self.lo <= matrix) and np.all(matrix <= self.hi))

    def __matmul__(self, other):
        return interval_matmul(self, other)

    def __repr__(self):
        return f"IntervalMatrix({self.rows}x{self.cols})"


def interval_matmul(a, b):
    if a.cols != b.rows:
        raise DimensionMismatchError(
            f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}"
        )
    lo, hi = matmul_bounds(a.lo, a.hi, b.lo, b.hi)
    return IntervalMatrix(lo, hi)


def interval_det(matrix):
    """
    Enclosure of {det(M) : M a real matrix inside ``matrix``}.

    Raises:
        DimensionMismatchError: If the matrix is not square.
        UnsupportedDimensionError: If it is larger than 6 x 6.
    """
    if matrix.rows != matrix.cols:
        raise DimensionMismatchError(
            f"determinant of a non-square {matrix.rows}x{matrix.cols} matrix"
        )
    lo, hi = det_bounds(matrix.lo, matrix.hi)
    return Interval(float(lo), float(hi))
