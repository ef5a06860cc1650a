import logging

import numpy as np

from setreach.exceptions import ModelSchemaError, ProblemSpecError
from setreach.interval.Activations import activation_deriv, activation_fn, check_activation

from .Network import Layer, Network

logger = logging.getLogger(__name__)


def philox_stream(seed):
    """
    A counter-based generator keyed by ``seed``.

    Raises:
        ProblemSpecError: If the seed is not a non-negative integer.
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ProblemSpecError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(key=int(seed)))


def generate_network(seed, dims, activation="tanh", scale=1.0, output_activation="linear", structure="dense"):
    """
    Build a deterministic network from a Philox stream keyed by ``seed``.

    ``structure="dense"`` draws every weight and bias uniform in [-scale, scale]
    in a fixed order (W_1, b_1, W_2, b_2, ...), so the same arguments give a
    bit-identical network on every platform numpy supports.

    ``structure="coupled"`` builds a square network that is invertible by
    construction, see ``_coupled_layers``; ``scale`` is then the size of the
    off-diagonal coupling between input dims.

    Args:
        seed: Non-negative integer key.
        dims: Layer widths from input to output, at least two entries.
        activation: Hidden-layer activation tag.
        scale: Half-width of the uniform range; small values keep the network
            close to its linearisation and favour invertibility.
        output_activation: Activation of the last layer.
        structure: ``"dense"`` or ``"coupled"``.
    """
    try:
        dims = [int(d) for d in dims]
    except (TypeError, ValueError) as e:
        raise ModelSchemaError(f"dims must be integer layer widths, got {dims!r}") from e
    if len(dims) < 2:
        raise ModelSchemaError(f"dims needs an input and an output width, got {dims}")
    if any(d < 1 for d in dims):
        raise ModelSchemaError(f"layer widths must be positive, got {dims}")
    if not scale > 0:
        raise ModelSchemaError(f"scale must be positive, got {scale}")
    check_activation(activation)
    check_activation(output_activation)

    rng = philox_stream(seed)
    if structure == "dense":
        layers = _dense_layers(rng, dims, activation, scale, output_activation)
    elif structure == "coupled":
        layers = _coupled_layers(rng, dims, activation, scale, output_activation)
    else:
        raise ModelSchemaError(f"unknown structure '{structure}', expected dense or coupled")
    net = Network(tuple(layers))
    logger.debug(f"Generated {structure} {net} from seed {seed}")
    return net


def _dense_layers(rng, dims, activation, scale, output_activation):
    layers = []
    for k, (n_in, n_out) in enumerate(zip(dims, dims[1:])):
        weights = rng.uniform(-scale, scale, size=(n_out, n_in))
        bias = rng.uniform(-scale, scale, size=n_out)
        act = output_activation if k == len(dims) - 2 else activation
        layers.append(Layer(weights, bias, act))
    return layers


def _channels(width, n):
    return np.arange(width) * n // width


def _coupled_layers(rng, dims, activation, scale, output_activation):
    """
    Layers of an n -> w_1 -> ... -> w_L -> n network with one channel per input dim.

    The first layer feeds every neuron of channel k the same row M_k of a
    mixing matrix M = I + C, where C has a zero diagonal and off-diagonal
    entries uniform in [-scale, scale]. Every later layer only connects neurons
    of the same channel, with positive weights normalised to sum to
    1 / act'(0) and biases that put each pre-activation at 0 when x = 0.
    Output k is then a strictly increasing function of M_k x, and M is
    strictly diagonally dominant, so the network is invertible everywhere.
    """
    n = dims[0]
    hidden = dims[1:-1]
    if dims[-1] != n or not hidden:
        raise ModelSchemaError(f"a coupled network needs n -> hidden... -> n, got {dims}")
    if any(w < n for w in hidden):
        raise ModelSchemaError(f"hidden widths must be at least the input dim {n}, got {hidden}")
    if (n - 1) * scale >= 1.0:
        raise ModelSchemaError(f"coupling {scale} is too large for a diagonally dominant {n}x{n} mixing")
    f0 = float(activation_fn(activation)(0.0))
    gain = 1.0 / float(activation_deriv(activation)(0.0))

    mixing = np.eye(n) + rng.uniform(-scale, scale, size=(n, n)) * (1.0 - np.eye(n))
    layers = [Layer(mixing[_channels(hidden[0], n)], np.zeros(hidden[0]), activation)]
    widths = hidden + [n]
    for k, (n_in, n_out) in enumerate(zip(widths, widths[1:])):
        same = _channels(n_out, n)[:, None] == _channels(n_in, n)[None, :]
        raw = rng.uniform(0.5, 1.5, size=(n_out, n_in)) * same
        weights = gain * raw / raw.sum(axis=1, keepdims=True)
        bias = -f0 * weights.sum(axis=1)
        act = output_activation if k == len(widths) - 2 else activation
        layers.append(Layer(weights, bias, act))
    return layers
