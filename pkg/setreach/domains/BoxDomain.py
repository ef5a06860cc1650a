import numpy as np

from setreach.exceptions import DimensionMismatchError
from setreach.interval.Activations import act_bounds
from setreach.interval.Box import Box
from setreach.interval.IntervalMatrix import point_matvec_bounds


def box_forward_bounds(net, lows, highs, keep_preactivations=False):
    """
    Interval forward pass for a batch of boxes.

    Args:
        net: The network.
        lows, highs: Cell bounds of shape (N, input_dim).
        keep_preactivations: Also return the per-layer pre-activation bounds,
            which the Jacobian enclosure needs.

    Returns:
        (out_lo, out_hi, preactivations) where preactivations is a list of
        (z_lo, z_hi) per layer, empty unless requested.
    """
    lows = np.atleast_2d(np.asarray(lows, dtype=float))
    highs = np.atleast_2d(np.asarray(highs, dtype=float))
    if lows.shape[-1] != net.input_dim or lows.shape != highs.shape:
        raise DimensionMismatchError(
            f"cells of shape {lows.shape} do not fit a network with {net.input_dim} inputs"
        )
    preactivations = []
    lo, hi = lows, highs
    for layer in net.layers:
        z_lo, z_hi = point_matvec_bounds(layer.weights, lo, hi, layer.bias)
        if keep_preactivations:
            preactivations.append((z_lo, z_hi))
        lo, hi = act_bounds(layer.activation, z_lo, z_hi)
    return lo, hi, preactivations


def box_propagate(net, cell):
    """Over-approximate {N(x) : x in cell} by interval arithmetic, layer by layer."""
    if cell.dim != net.input_dim:
        raise DimensionMismatchError(
            f"cell has {cell.dim} dims, network expects {net.input_dim}"
        )
    lo, hi, _ = box_forward_bounds(net, cell.lo[None, :], cell.hi[None, :])
    return Box(lo[0], hi[0])
