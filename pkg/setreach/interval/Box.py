from dataclasses import dataclass

import numpy as np

from setreach.exceptions import DimensionMismatchError, IntervalDomainError, SetReachError

from .Interval import Interval, check_bounds
from .rounding import round_down, round_up

BOX_OPS = ("hull", "contains", "intersects", "width", "split")


@dataclass(frozen=True, eq=False)
class Box:
    """
    Axis-aligned product of closed intervals.

    Degenerate dimensions (lo == hi) are allowed; boundary faces are boxes with
    one pinned dimension.
    """

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = check_bounds(np.atleast_1d(self.lo), np.atleast_1d(self.hi))
        if lo.ndim != 1 or lo.size == 0:
            raise IntervalDomainError(f"a box needs a non-empty 1-D bound vector, got {lo.shape}")
        lo, hi = lo.copy(), hi.copy()
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_intervals(cls, dims):
        return cls([d.lo for d in dims], [d.hi for d in dims])

    @classmethod
    def from_pairs(cls, pairs):
        pairs = [tuple(p) for p in pairs]
        if any(len(p) != 2 for p in pairs):
            raise IntervalDomainError("box bounds must be [lo, hi] pairs")
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @classmethod
    def point(cls, x):
        return cls(x, x)

    @property
    def dim(self):
        return self.lo.shape[0]

    @property
    def dims(self):
        return [Interval(l, h) for l, h in zip(self.lo, self.hi)]

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return 0.5 * (self.lo + self.hi)

    def degenerate_dims(self):
        return [k for k in range(self.dim) if self.lo[k] == self.hi[k]]

    def is_degenerate(self):
        return bool(np.any(self.lo == self.hi))

    def is_point(self):
        return bool(np.all(self.lo == self.hi))

    def to_pairs(self):
        return [[float(l), float(h)] for l, h in zip(self.lo, self.hi)]

    def _check(self, other):
        if other.dim != self.dim:
            raise DimensionMismatchError(f"box dimensions differ: {self.dim} vs {other.dim}")

    def hull(self, other):
        self._check(other)
        return Box(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def contains(self, other):
        """True if ``other`` (a Box or a point) lies inside this closed box."""
        if isinstance(other, Box):
            self._check(other)
            return bool(np.all(self.lo <= other.lo) and np.all(other.hi <= self.hi))
        point = np.asarray(other, dtype=float)
        if point.shape != (self.dim,):
            raise DimensionMismatchError(f"point of shape {point.shape} in a {self.dim}-box")
        return bool(np.all(self.lo <= point) and np.all(point <= self.hi))

    def intersects(self, other):
        self._check(other)
        return bool(np.all(self.lo <= other.hi) and np.all(other.lo <= self.hi))

    def split(self):
        """Bisect the widest dimension; returns the (lower, upper) halves."""
        k = int(np.argmax(self.width))
        mid = 0.5 * (self.lo[k] + self.hi[k])
        left_hi = self.hi.copy()
        left_hi[k] = mid
        right_lo = self.lo.copy()
        right_lo[k] = mid
        return Box(self.lo, left_hi), Box(right_lo, self.hi)

    def inflate(self, eps):
        return Box(round_down(self.lo - eps), round_up(self.hi + eps))

    def __eq__(self, other):
        if not isinstance(other, Box):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes()))

    def __repr__(self):
        inner = " x ".join(f"[{l:g}, {h:g}]" for l, h in zip(self.lo, self.hi))
        return f"Box({inner})"


def box_ops(kind, *args):
    """
    Dispatch a set-bookkeeping operation by name.

    ``hull``/``contains``/``intersects`` take two boxes, ``width``/``split`` one.
    """
    if kind == "hull":
        return args[0].hull(args[1])
    if kind == "contains":
        return args[0].contains(args[1])
    if kind == "intersects":
        return args[0].intersects(args[1])
    if kind == "width":
        return args[0].width
    if kind == "split":
        return args[0].split()
    raise SetReachError(f"unknown box operation '{kind}', expected one of {BOX_OPS}")


def hull_of_bounds(lows, highs):
    """Box hull of a stack of per-row bounds with shape (N, d)."""
    lows = np.asarray(lows, dtype=float)
    highs = np.asarray(highs, dtype=float)
    return Box(lows.min(axis=0), highs.max(axis=0))
