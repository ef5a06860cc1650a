"""Outward rounding helpers.

Each elementary operation is followed by a one-step nudge of its endpoints
(``np.nextafter``), which covers a single round-to-nearest error. Dot products
additionally carry the classical accumulation bound gamma_k * sum|terms|.
"""

import numpy as np

UNIT_ROUNDOFF = 2.0**-53

# libm tanh/exp are faithful, not correctly rounded.
LIBM_STEPS = 2
DERIV_STEPS = 4


def round_down(x, steps=1):
    x = np.asarray(x, dtype=float)
    for _ in range(steps):
        x = np.nextafter(x, -np.inf)
    return x


def round_up(x, steps=1):
    x = np.asarray(x, dtype=float)
    for _ in range(steps):
        x = np.nextafter(x, np.inf)
    return x


def round_outward(lo, hi, steps=1):
    return round_down(lo, steps), round_up(hi, steps)


def gamma(k):
    """Bound on the relative error of a k-term floating sum of products."""
    ku = k * UNIT_ROUNDOFF
    return ku / (1.0 - ku)
