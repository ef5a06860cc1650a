import itertools
from dataclasses import dataclass

import numpy as np

from setreach.exceptions import DimensionMismatchError, SetReachError
from setreach.interval.Box import Box


def _edges(lo, hi, count):
    # Shared faces use the same float, so neighbouring cells tile exactly.
    edges = lo + np.arange(count + 1) * ((hi - lo) / count)
    edges[0] = lo
    edges[-1] = hi
    return edges


@dataclass(frozen=True, eq=False)
class CellGrid:
    """
    Uniform partition of ``base`` into prod(counts) closed cells in row-major order.

    Cells are enumerated lazily; ``bounds()`` materialises all of them as arrays.
    """

    base: Box
    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != self.base.dim:
            raise DimensionMismatchError(
                f"{len(counts)} counts for a {self.base.dim}-dim box"
            )
        if any(c < 1 for c in counts):
            raise SetReachError(f"partition counts must be >= 1, got {counts}")
        for k in self.base.degenerate_dims():
            if counts[k] != 1:
                raise SetReachError(f"degenerate dim {k} must have count 1, got {counts[k]}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(
            self,
            "_edges",
            [_edges(self.base.lo[k], self.base.hi[k], c) for k, c in enumerate(counts)],
        )

    def __len__(self):
        return int(np.prod(self.counts))

    @property
    def dim(self):
        return self.base.dim

    def index_iter(self):
        return itertools.product(*(range(c) for c in self.counts))

    def cell(self, index):
        if len(index) != self.dim:
            raise DimensionMismatchError(f"index {index} for a {self.dim}-dim grid")
        lo = [self._edges[k][i] for k, i in enumerate(index)]
        hi = [self._edges[k][i + 1] for k, i in enumerate(index)]
        return Box(lo, hi)

    def cells(self):
        for index in self.index_iter():
            yield index, self.cell(index)

    def indices(self):
        """All multi-indices as an (N, n) integer array in row-major order."""
        grids = np.meshgrid(*(np.arange(c) for c in self.counts), indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    def bounds(self, indices=None):
        """Cell bounds (lows, highs) of shape (N, n) for the given (default: all) indices."""
        if indices is None:
            indices = self.indices()
        indices = np.asarray(indices, dtype=int).reshape(-1, self.dim)
        lows = np.empty(indices.shape)
        highs = np.empty(indices.shape)
        for k in range(self.dim):
            lows[:, k] = self._edges[k][indices[:, k]]
            highs[:, k] = self._edges[k][indices[:, k] + 1]
        return lows, highs

    def touches_boundary(self, indices=None):
        """Per cell: does any face of the cell lie on the boundary of ``base``?"""
        if indices is None:
            indices = self.indices()
        counts = np.asarray(self.counts)
        interior = (indices > 0) & (indices + 1 < counts)
        return ~np.all(interior, axis=1)


def partition(box, counts):
    """
    Split ``box`` into a uniform grid.

    ``counts`` is one count per dim, or a single int used for every
    non-degenerate dim (degenerate dims always get 1).
    """
    if np.isscalar(counts):
        counts = [1 if box.lo[k] == box.hi[k] else int(counts) for k in range(box.dim)]
    return CellGrid(box, tuple(counts))


def boundary_faces(box):
    """
    The 2n faces of a box: dim k pinned to lo_k, then to hi_k, for k = 0..n-1.

    Raises:
        SetReachError: If any dim is degenerate.
    """
    if box.is_degenerate():
        raise SetReachError(
            f"boundary faces need a box that is non-degenerate in every dim, got {box}"
        )
    faces = []
    for k in range(box.dim):
        for pinned in (box.lo[k], box.hi[k]):
            lo = box.lo.copy()
            hi = box.hi.copy()
            lo[k] = hi[k] = pinned
            faces.append(Box(lo, hi))
    return faces


def boundary_grids(box, counts):
    """Partition each face with the box's counts, forcing the pinned dim to 1."""
    counts = [int(counts)] * box.dim if np.isscalar(counts) else [int(c) for c in counts]
    if len(counts) != box.dim:
        raise DimensionMismatchError(f"{len(counts)} counts for a {box.dim}-dim box")
    grids = []
    for face_no, face in enumerate(boundary_faces(box)):
        face_counts = list(counts)
        face_counts[face_no // 2] = 1
        grids.append(CellGrid(face, tuple(face_counts)))
    return grids
