import numpy as np
import pytest

from conftest import make_net, uniform_points
from setreach.domains import Domain, ReachSet, Zonotope, box_propagate, propagate, propagate_cells, zono_activation, zono_affine, zono_from_box
from setreach.domains.Zonotope import zono_propagate
from setreach.exceptions import DimensionMismatchError, SetReachError
from setreach.interval import Box
from setreach.network import forward_batch, generate_network
from setreach.topology import partition


def test_domain_aliases():
    assert Domain.parse("interval") is Domain.BOX
    assert Domain.parse("zono") is Domain.ZONOTOPE
    assert Domain.parse(Domain.BOX) is Domain.BOX
    with pytest.raises(SetReachError):
        Domain.parse("polytope")


def test_identity_box_propagation_is_tight(identity_net, unit_box):
    out = box_propagate(identity_net, unit_box)
    assert np.allclose(out.lo, unit_box.lo, atol=1e-15)
    assert np.allclose(out.hi, unit_box.hi, atol=1e-15)
    assert out.contains(unit_box)


def test_point_cell_propagates_to_a_tiny_box(invertible_net):
    cell = Box.point([0.3, 0.6])
    out = box_propagate(invertible_net, cell)
    y = invertible_net([0.3, 0.6])
    assert out.contains(y)
    assert np.max(out.width) < 1e-13


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("domain", ["box", "zonotope"])
def test_reach_sets_contain_sampled_images(seed, domain, rng):
    net = generate_network(seed, [2, 8, 8, 2], activation="tanh" if seed % 2 else "sigmoid", scale=0.8)
    cell = Box([-0.4, 0.1], [0.2, 0.5])
    reach = propagate(net, cell, domain)
    assert isinstance(reach, ReachSet)
    images = forward_batch(net, uniform_points(cell, 2000, rng))
    hull = reach.hull()
    assert np.all(images >= hull.lo) and np.all(images <= hull.hi)


def test_zonotope_contains_images_exactly(small_invertible_net, rng):
    cell = Box([0.0, 0.0], [0.5, 0.5])
    z = zono_propagate(small_invertible_net, cell)
    images = forward_batch(small_invertible_net, uniform_points(cell, 50, rng))
    assert z.contains(images).all()
    far = z.interval_hull().hi + 1.0
    assert not z.contains(far).any()


def test_zonotope_of_linear_net_is_exact(rng):
    net = make_net(([[2.0, 1.0], [0.5, -1.0]], [1.0, 0.0], "linear"))
    z = zono_propagate(net, Box([0.0, 0.0], [1.0, 1.0]))
    assert z.order == 2
    corners = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    assert z.contains(forward_batch(net, corners)).all()
    lo, hi = z.hull_bounds()
    assert np.allclose(lo, [1.0, -1.0], atol=1e-12)
    assert np.allclose(hi, [4.0, 0.5], atol=1e-12)


def test_zono_from_box_skips_degenerate_dims():
    z = zono_from_box(Box([0.0, 2.0], [1.0, 2.0]))
    assert z.order == 1
    assert z.error[1] == 0.0
    assert z.interval_hull().contains(Box([0.0, 2.0], [1.0, 2.0]))


def test_zono_activation_adds_one_generator_per_active_dim():
    z = zono_from_box(Box([-1.0, 0.5], [1.0, 0.5]))
    out = zono_activation(zono_affine(z, np.eye(2), np.zeros(2)), "tanh")
    assert z.order + 1 <= out.order <= z.order + 2
    lo, hi = out.hull_bounds()
    assert lo[0] <= np.tanh(-1.0) and hi[0] >= np.tanh(1.0)
    assert lo[1] <= np.tanh(0.5) <= hi[1]
    assert zono_activation(z, "linear") is z


def test_zonotope_validation():
    with pytest.raises(DimensionMismatchError):
        Zonotope(np.zeros(2), np.zeros((3, 1)))
    with pytest.raises(DimensionMismatchError):
        Zonotope(np.zeros(2), np.zeros((2, 1)), error=[-1.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        zono_affine(zono_from_box(Box([0, 0], [1, 1])), np.ones((2, 3)), np.zeros(2))


def test_propagate_checks_dimensions(invertible_net):
    with pytest.raises(DimensionMismatchError):
        propagate(invertible_net, Box([0.0], [1.0]), "box")
    with pytest.raises(DimensionMismatchError):
        propagate_cells(invertible_net, np.zeros((3, 3)), np.ones((3, 3)), "box")


@pytest.mark.parametrize("domain", ["box", "zonotope"])
def test_propagate_cells_matches_single_cell_propagation(domain, fold_net, sym_box):
    grid = partition(sym_box, 3)
    lows, highs = grid.bounds()
    out_lo, out_hi = propagate_cells(fold_net, lows, highs, domain, chunk_size=4)
    for n, (_, cell) in enumerate(grid.cells()):
        hull = propagate(fold_net, cell, domain).hull()
        np.testing.assert_allclose(out_lo[n], hull.lo, rtol=0, atol=1e-13)
        np.testing.assert_allclose(out_hi[n], hull.hi, rtol=0, atol=1e-13)


@pytest.mark.parametrize("domain", ["box", "zonotope"])
def test_propagate_cells_is_independent_of_worker_count(domain, fold_net, sym_box):
    lows, highs = partition(sym_box, 6).bounds()
    serial = propagate_cells(fold_net, lows, highs, domain, n_jobs=1, chunk_size=7)
    parallel = propagate_cells(fold_net, lows, highs, domain, n_jobs=2, chunk_size=7)
    assert np.array_equal(serial[0], parallel[0])
    assert np.array_equal(serial[1], parallel[1])


def test_propagate_cells_empty_batch(fold_net):
    out_lo, out_hi = propagate_cells(fold_net, np.empty((0, 2)), np.empty((0, 2)), "box")
    assert out_lo.shape == (0, 2) and out_hi.shape == (0, 2)


def test_zono_from_box_examples():
    z = zono_from_box(Box([0.0, 1.0], [2.0, 1.0]))
    np.testing.assert_array_equal(z.center, [1.0, 1.0])
    np.testing.assert_array_equal(z.generators, [[1.0], [0.0]])
    assert zono_from_box(Box.point([0.3, -0.2])).order == 0
    cube = zono_from_box(Box([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0]))
    np.testing.assert_array_equal(cube.generators, np.eye(3))


def test_zono_affine_scales_generators():
    z = zono_from_box(Box([-1.0, 0.0], [1.0, 4.0]))
    doubled = zono_affine(z, 2.0 * np.eye(2), np.zeros(2))
    np.testing.assert_array_equal(doubled.center, 2.0 * z.center)
    np.testing.assert_array_equal(doubled.generators, 2.0 * z.generators)


def test_one_dim_tanh_transformer():
    out = zono_activation(zono_from_box(Box([-1.0], [1.0])), "tanh")
    slope = 1.0 - np.tanh(1.0) ** 2
    offset = np.tanh(1.0) - slope
    assert out.order == 2
    np.testing.assert_allclose(out.generators[0, 0], slope, rtol=1e-9)
    np.testing.assert_allclose(out.generators[0, 1], offset, rtol=1e-9)
    assert abs(out.center[0]) < 1e-12
    lo, hi = out.hull_bounds()
    assert lo[0] <= -np.tanh(1.0) and hi[0] >= np.tanh(1.0)
    np.testing.assert_allclose([lo[0], hi[0]], [-0.7615941559557649, 0.7615941559557649], atol=1e-9)


def test_point_zonotope_stays_nearly_a_point():
    out = zono_activation(zono_from_box(Box.point([0.5])), "sigmoid")
    lo, hi = out.hull_bounds()
    assert lo[0] <= 1.0 / (1.0 + np.exp(-0.5)) <= hi[0]
    assert hi[0] - lo[0] < 1e-12


def test_identity_zonotope_propagation_is_tight(identity_net, unit_box):
    out = propagate(identity_net, unit_box, "zonotope").hull()
    assert out.contains(unit_box)
    np.testing.assert_allclose(out.lo, unit_box.lo, atol=1e-12)
    np.testing.assert_allclose(out.hi, unit_box.hi, atol=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_box_propagation_is_monotone_in_the_cell(seed, rng):
    net = generate_network(seed, [2, 8, 8, 2], activation="tanh" if seed % 2 else "sigmoid", scale=1.0)
    for _ in range(20):
        corners = np.sort(rng.uniform(-1.0, 1.0, size=(2, 2)), axis=0)
        cell = Box(corners[0], corners[1])
        inner = np.sort(rng.uniform(cell.lo, cell.hi, size=(2, 2)), axis=0)
        sub = Box(inner[0], inner[1])
        assert box_propagate(net, cell).contains(box_propagate(net, sub))
        assert box_propagate(net, cell).contains(box_propagate(net, Box.point(sub.lo)))


def test_activation_carries_the_error_radius_forward():
    z = Zonotope([0.0], [[1.0]], error=[0.1])
    out = zono_activation(z, "tanh")
    lo, hi = z.hull_bounds()
    slope = 1.0 - np.tanh(hi[0]) ** 2
    assert out.order == 2
    assert out.error[0] >= slope * 0.1 * (1.0 - 1e-12)
    assert out.error[0] < slope * 0.1 + 1e-12
    out_lo, out_hi = out.hull_bounds()
    assert out_lo[0] <= np.tanh(-1.1) and out_hi[0] >= np.tanh(1.1)
