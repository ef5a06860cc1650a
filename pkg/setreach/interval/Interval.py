import math
from dataclasses import dataclass

import numpy as np

from setreach.exceptions import IntervalDomainError

from .rounding import round_down, round_up

COMBINE_OPS = ("add", "sub", "mul", "scale", "neg")


# Array forms. Every function takes and returns (lo, hi) arrays of equal shape;
# they are the vectorised substrate behind Interval, IntervalMatrix and Box.


def add_bounds(alo, ahi, blo, bhi):
    return round_down(np.add(alo, blo)), round_up(np.add(ahi, bhi))


def sub_bounds(alo, ahi, blo, bhi):
    return round_down(np.subtract(alo, bhi)), round_up(np.subtract(ahi, blo))


def mul_bounds(alo, ahi, blo, bhi):
    products = np.stack(
        np.broadcast_arrays(
            np.multiply(alo, blo),
            np.multiply(alo, bhi),
            np.multiply(ahi, blo),
            np.multiply(ahi, bhi),
        )
    )
    return round_down(products.min(axis=0)), round_up(products.max(axis=0))


def scale_bounds(lo, hi, factor):
    a = np.multiply(lo, factor)
    b = np.multiply(hi, factor)
    return round_down(np.minimum(a, b)), round_up(np.maximum(a, b))


def neg_bounds(lo, hi):
    # Negation is exact in binary floating point.
    return -np.asarray(hi, dtype=float), -np.asarray(lo, dtype=float)


def check_bounds(lo, hi):
    """Raise IntervalDomainError unless lo <= hi elementwise with finite entries."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.shape != hi.shape:
        raise IntervalDomainError(f"endpoint shapes differ: {lo.shape} vs {hi.shape}")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise IntervalDomainError("interval endpoints must be finite")
    if np.any(lo > hi):
        raise IntervalDomainError("interval lower endpoint exceeds upper endpoint")
    return lo, hi


@dataclass(frozen=True)
class Interval:
    """A closed real interval [lo, hi] with finite endpoints."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise IntervalDomainError(f"non-finite interval [{lo}, {hi}]")
        if lo > hi:
            raise IntervalDomainError(f"inverted interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x):
        return cls(x, x)

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    def is_point(self):
        return self.lo == self.hi

    def contains(self, other):
        if isinstance(other, Interval):
            return self.lo <= other.lo and other.hi <= self.hi
        return self.lo <= other <= self.hi

    __contains__ = contains

    def intersects(self, other):
        # Closed intervals: touching endpoints intersect.
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other):
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def excludes_zero(self):
        return self.lo > 0.0 or self.hi < 0.0

    def __add__(self, other):
        return interval_combine("add", self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return interval_combine("sub", self, other)

    def __rsub__(self, other):
        return interval_combine("sub", _lift(other), self)

    def __mul__(self, other):
        return interval_combine("mul", self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return interval_combine("neg", self)

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def _lift(value):
    if isinstance(value, Interval):
        return value
    value = float(value)
    if not math.isfinite(value):
        raise IntervalDomainError(f"non-finite operand {value}")
    return Interval(value, value)


def interval_combine(op, a, b=None):
    """
    Combine intervals with outward rounding.

    Args:
        op: One of ``add``, ``sub``, ``mul``, ``scale``, ``neg``.
        a: Left operand.
        b: Right operand, an Interval or a finite real. ``scale`` expects a real
            factor, ``neg`` ignores it.

    Returns:
        Interval: An enclosure of {x op y : x in a, y in b}.
    """
    a = _lift(a)
    if op == "neg":
        lo, hi = neg_bounds(a.lo, a.hi)
    elif op == "scale":
        if isinstance(b, Interval):
            raise IntervalDomainError("scale expects a real factor")
        factor = _lift(b).lo
        lo, hi = scale_bounds(a.lo, a.hi, factor)
    elif op in ("add", "sub", "mul"):
        b = _lift(b)
        combine = {"add": add_bounds, "sub": sub_bounds, "mul": mul_bounds}[op]
        lo, hi = combine(a.lo, a.hi, b.lo, b.hi)
    else:
        raise IntervalDomainError(f"unknown interval operation '{op}'")
    return Interval(float(lo), float(hi))


def hull_of(values):
    """Smallest interval containing every real in ``values``."""
    values = np.asarray(values, dtype=float)
    return Interval(float(values.min()), float(values.max()))
