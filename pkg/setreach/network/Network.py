from dataclasses import dataclass

import numpy as np

from setreach.exceptions import DimensionMismatchError, ModelSchemaError
from setreach.interval.Activations import activation_deriv, activation_fn, check_activation


@dataclass(frozen=True, eq=False)
class Layer:
    """Dense layer y = act(W x + b) with W of shape (out, in)."""

    weights: np.ndarray
    bias: np.ndarray
    activation: str

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        bias = np.array(self.bias, dtype=float)
        if weights.ndim != 2 or weights.size == 0:
            raise ModelSchemaError(f"weights must be a non-empty matrix, got shape {weights.shape}")
        if bias.ndim != 1 or bias.shape[0] != weights.shape[0]:
            raise ModelSchemaError(
                f"bias length {bias.shape} does not match {weights.shape[0]} weight rows"
            )
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(bias))):
            raise ModelSchemaError("layer entries must be finite")
        check_activation(self.activation)
        weights.flags.writeable = False
        bias.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", bias)

    @property
    def in_dim(self):
        return self.weights.shape[1]

    @property
    def out_dim(self):
        return self.weights.shape[0]


@dataclass(frozen=True, eq=False)
class Network:
    """Feedforward network; immutable once built."""

    layers: tuple

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ModelSchemaError("a network needs at least one layer")
        for k, (prev, nxt) in enumerate(zip(layers, layers[1:])):
            if prev.out_dim != nxt.in_dim:
                raise ModelSchemaError(
                    f"layer {k} outputs {prev.out_dim} values but layer {k + 1} expects {nxt.in_dim}"
                )
        object.__setattr__(self, "layers", layers)

    @property
    def input_dim(self):
        return self.layers[0].in_dim

    @property
    def output_dim(self):
        return self.layers[-1].out_dim

    @property
    def is_square(self):
        return self.input_dim == self.output_dim

    @property
    def dims(self):
        return [self.input_dim] + [layer.out_dim for layer in self.layers]

    def __call__(self, x):
        return forward_point(self, x)

    def __repr__(self):
        acts = ",".join(layer.activation for layer in self.layers)
        return f"Network({'-'.join(map(str, self.dims))}; {acts})"


def _check_input(net, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (net.input_dim,):
        raise DimensionMismatchError(
            f"network expects {net.input_dim} inputs, got shape {x.shape}"
        )
    return x


def forward_point(net, x):
    """Evaluate y_l = f_l(W_l y_(l-1) + b_l) across all layers at one input."""
    y = _check_input(net, x)
    if y.ndim != 1:
        raise DimensionMismatchError(f"forward_point takes a single vector, got {y.shape}")
    for layer in net.layers:
        y = activation_fn(layer.activation)(layer.weights @ y + layer.bias)
    return np.asarray(y, dtype=float)


def forward_batch(net, xs):
    """Evaluate the network on every row of ``xs`` (shape (N, input_dim))."""
    y = np.atleast_2d(_check_input(net, xs))
    for layer in net.layers:
        y = activation_fn(layer.activation)(y @ layer.weights.T + layer.bias)
    return np.asarray(y, dtype=float)


def point_jacobian(net, x):
    """
    Jacobian dN/dx at ``x`` by the chain rule, J = prod_l diag(f_l'(z_l)) W_l
    accumulated right to left.
    """
    y = _check_input(net, x)
    jac = np.eye(net.input_dim)
    for layer in net.layers:
        z = layer.weights @ y + layer.bias
        jac = activation_deriv(layer.activation)(z)[:, None] * (layer.weights @ jac)
        y = activation_fn(layer.activation)(z)
    return jac


def jacobian_batch(net, xs):
    """Jacobians at every row of ``xs``; shape (N, output_dim, input_dim)."""
    y = np.atleast_2d(_check_input(net, xs))
    jac = np.broadcast_to(np.eye(net.input_dim), (y.shape[0], net.input_dim, net.input_dim))
    for layer in net.layers:
        z = y @ layer.weights.T + layer.bias
        jac = activation_deriv(layer.activation)(z)[:, :, None] * np.einsum("ij,njk->nik", layer.weights, jac)
        y = activation_fn(layer.activation)(z)
    return jac
