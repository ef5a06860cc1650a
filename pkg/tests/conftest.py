import os

import numpy as np
import pytest
from hypothesis import settings

from setreach.interval import Box
from setreach.network import Layer, Network

settings.register_profile("setreach", max_examples=60, deadline=None)
settings.load_profile("setreach")

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
MODELS = os.path.join(ROOT, "data", "models")
PROBLEMS = os.path.join(ROOT, "data", "problems")


def make_net(*layers):
    return Network(tuple(Layer(np.array(w, dtype=float), np.array(b, dtype=float), act) for w, b, act in layers))


INVERTIBLE_W1 = [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.3, -0.3], [0.2, 0.1]]
INVERTIBLE_W2 = [[1.0, 0.0, 0.1, 0.1, 0.0], [0.0, 1.0, 0.1, -0.1, 0.0]]

FOLD_W1 = [[3.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.5, 0.5], [-0.5, 0.5], [0.2, 0.0], [0.0, 0.2]]
FOLD_W2 = [[1.0, 0.0, -0.5, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.01, 0.01, 0.0, 0.0]]


@pytest.fixture
def identity_net():
    return make_net((np.eye(2), np.zeros(2), "linear"))


@pytest.fixture
def singular_net():
    return make_net(([[1.0, 1.0], [1.0, 1.0]], np.zeros(2), "linear"))


@pytest.fixture
def invertible_net():
    """2-5-2 tanh/linear network whose Jacobian determinant is positive on [0,1]^2."""
    return make_net((INVERTIBLE_W1, np.zeros(5), "tanh"), (INVERTIBLE_W2, np.zeros(2), "linear"))


@pytest.fixture
def small_invertible_net():
    return make_net(
        ([[1.0, 0.3], [-0.2, 0.8]], np.zeros(2), "tanh"),
        ([[0.9, -0.1], [0.2, 1.1]], np.zeros(2), "linear"),
    )


@pytest.fixture
def fold_net():
    """2-7-2 network whose first output folds near |x1| = 0.55 on [-1,1]^2."""
    return make_net((FOLD_W1, np.zeros(7), "tanh"), (FOLD_W2, np.zeros(2), "linear"))


@pytest.fixture
def unit_box():
    return Box([0.0, 0.0], [1.0, 1.0])


@pytest.fixture
def sym_box():
    return Box([-1.0, -1.0], [1.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def uniform_points(box, n, rng):
    return box.lo + rng.random((n, box.dim)) * (box.hi - box.lo)
