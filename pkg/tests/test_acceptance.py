"""End-to-end properties on seeded networks: soundness, certification, accounting and efficiency."""

import itertools
import time

import numpy as np
import pytest

from conftest import MODELS, uniform_points
from setreach.domains import box_propagate, propagate_cells
from setreach.interval import Box
from setreach.network import forward_batch, generate_network, jacobian_batch, load_network, point_jacobian
from setreach.topology import boundary_grids, certify_homeomorphism, extract_subset, jacobian_interval, partition
from setreach.verifier import Status, VerificationProblem, monte_carlo, verify, verify_boundary, verify_full

INPUT = Box([-0.5, -0.5], [0.5, 0.5])
EXAMPLE1_SAFE = Box([-3.85, -0.9], [-1.85, 1.7])


def seeded_net(seed):
    return generate_network(seed, [2, 6, 2], activation="tanh" if seed % 2 == 0 else "sigmoid", scale=0.8)


def coupled_net(seed):
    activation = "tanh" if seed % 2 == 0 else "sigmoid"
    return generate_network(seed, [2, 6, 6, 2], activation=activation, scale=0.3, structure="coupled")


def loose_safe(net, margin):
    hull = monte_carlo(net, INPUT, 2000, seed=99).image_hull
    return Box(hull.lo - margin * hull.width - 1e-3, hull.hi + margin * hull.width + 1e-3)


def test_partition_arithmetic_of_the_unit_square():
    started = time.perf_counter()
    unit = Box([0.0, 0.0], [1.0, 1.0])
    assert len(partition(unit, 100)) == 10_000
    assert sum(len(grid) for grid in boundary_grids(unit, 100)) == 400
    assert time.perf_counter() - started < 1.0


@pytest.mark.parametrize("seed", range(9))
@pytest.mark.parametrize("domain", ["box", "zonotope"])
@pytest.mark.parametrize("mode", ["full", "subset", "auto"])
def test_safe_verdicts_survive_monte_carlo(seed, domain, mode):
    net = seeded_net(seed)
    safe = loose_safe(net, 0.25)
    verdict = verify(VerificationProblem(net, INPUT, safe, domain=domain, mode=mode, grid=8, max_refinements=1))
    mc = monte_carlo(net, INPUT, 100_000, seed=seed, safe=safe)
    if verdict.status is Status.SAFE:
        assert mc.n_violations == 0
    assert box_propagate(net, INPUT).contains(mc.image_hull)
    assert verdict.output_hull.contains(mc.image_hull)


@pytest.mark.parametrize("seed", range(9))
def test_boundary_verdicts_on_certified_nets_survive_monte_carlo(seed):
    net = coupled_net(seed)
    assert certify_homeomorphism(net, INPUT).certified
    safe = loose_safe(net, 0.1)
    verdict = verify_boundary(VerificationProblem(net, INPUT, safe, grid=16))
    mc = monte_carlo(net, INPUT, 100_000, seed=seed, safe=safe)
    assert verdict.is_safe
    assert mc.n_violations == 0
    assert verdict.output_hull.contains(mc.image_hull)


def test_seeded_suite_produces_safe_verdicts():
    verdicts = [
        verify(VerificationProblem(seeded_net(seed), INPUT, loose_safe(seeded_net(seed), 0.25), grid=8))
        for seed in range(9)
    ]
    assert sum(v.is_safe for v in verdicts) >= 5


@pytest.mark.parametrize("seed", range(20))
def test_certified_cells_pass_dense_sampling(seed):
    net = generate_network(seed, [2, 5, 2], activation="tanh", scale=0.7)
    extraction = extract_subset(net, Box([-1.0, -1.0], [1.0, 1.0]), 3)
    rng = np.random.default_rng(seed)
    lows, highs = extraction.grid.bounds()
    for n in np.flatnonzero(extraction.certified_mask):
        cell = Box(lows[n], highs[n])
        dets = np.linalg.det(jacobian_batch(net, uniform_points(cell, 10_000, rng)))
        assert np.all(dets != 0.0)
        assert np.all(np.sign(dets) == np.sign(dets[0]))
        assert np.all(dets >= extraction.det_lo[n]) and np.all(dets <= extraction.det_hi[n])


def bisection_children(cell):
    mid = cell.midpoint
    halves = [((cell.lo[k], mid[k]), (mid[k], cell.hi[k])) for k in range(cell.dim)]
    for choice in itertools.product(*halves):
        yield Box([lo for lo, _ in choice], [hi for _, hi in choice])


@pytest.mark.parametrize("seed", range(8))
def test_certification_survives_bisection(seed):
    net = generate_network(seed, [2, 5, 2], activation="tanh" if seed % 2 == 0 else "sigmoid", scale=0.7)
    extraction = extract_subset(net, Box([-1.0, -1.0], [1.0, 1.0]), 4)
    lows, highs = extraction.grid.bounds()
    for n in np.flatnonzero(extraction.certified_mask):
        parent = certify_homeomorphism(net, Box(lows[n], highs[n]))
        children = [certify_homeomorphism(net, child) for child in bisection_children(Box(lows[n], highs[n]))]
        assert len(children) == 4
        for child in children:
            assert child.certified
            assert parent.det_interval.contains(child.det_interval)


def test_coupled_networks_certify_on_the_whole_input():
    for seed in range(9):
        assert certify_homeomorphism(coupled_net(seed), INPUT).certified
    cube = Box([-0.25] * 3, [0.25] * 3)
    net = generate_network(4, [3] + [100] * 10 + [3], activation="sigmoid", scale=0.2, structure="coupled")
    result = certify_homeomorphism(net, cube)
    assert result.certified and result.det_interval.lo > 0.0


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("k", [3, 5, 8])
def test_extraction_accounting(seed, k):
    net = generate_network(seed, [2, 6, 2], scale=1.0)
    extraction = extract_subset(net, Box([-1.0, -0.5], [1.0, 1.5]), k)
    counts = extraction.counts
    assert counts["kept"] + counts["certified_interior"] == counts["total"] == k * k
    assert not extraction.grid.touches_boundary(extraction.certified_interior_cells).any()


@pytest.mark.parametrize("seed", range(8))
def test_boundary_hull_within_full_hull_and_refinement_never_grows(seed):
    net = seeded_net(seed)
    safe = Box([-1e3, -1e3], [1e3, 1e3])
    hulls = []
    for k in (4, 8, 16):
        p = VerificationProblem(net, INPUT, safe, grid=k)
        full = verify_full(p).output_hull
        boundary = verify_boundary(p).output_hull
        assert full.inflate(1e-9).contains(boundary)
        hulls.append(full)
    for coarse, fine in zip(hulls, hulls[1:]):
        assert coarse.inflate(1e-9).contains(fine)


@pytest.mark.parametrize("seed", range(10))
def test_zonotope_hulls_within_box_hulls(seed):
    net = generate_network(seed, [2, 8, 8, 2], activation="tanh" if seed % 2 else "sigmoid", scale=0.9)
    lows, highs = partition(INPUT, 4).bounds()
    box_lo, box_hi = propagate_cells(net, lows, highs, "box")
    zono_lo, zono_hi = propagate_cells(net, lows, highs, "zonotope")
    assert np.all(zono_lo >= box_lo - 1e-9)
    assert np.all(zono_hi <= box_hi + 1e-9)


def test_boundary_mode_is_cheaper_than_full_mode():
    net = load_network(f"{MODELS}/example1_2-5-2.json")
    unit = Box([0.0, 0.0], [1.0, 1.0])
    p = VerificationProblem(net, unit, EXAMPLE1_SAFE, domain="zonotope", grid=100)
    assert certify_homeomorphism(net, unit).certified
    boundary = verify_boundary(p)
    full = verify_full(p)
    assert boundary.is_safe and full.is_safe
    assert boundary.stats.cells_propagated == 400
    assert full.stats.cells_propagated == 10_000
    assert boundary.stats.cells_propagated <= 0.04 * full.stats.cells_propagated
    assert boundary.stats.wall_time < full.stats.wall_time


@pytest.mark.parametrize("seed", range(100))
def test_point_jacobian_matches_central_differences(seed):
    rng = np.random.default_rng(seed)
    net = generate_network(seed % 10, [2, 7, 7, 2], activation="tanh" if seed % 2 else "sigmoid")
    x = rng.uniform(-1.0, 1.0, size=2)
    h = 1e-5
    columns = []
    for k in range(2):
        step = np.zeros(2)
        step[k] = h
        columns.append((forward_batch(net, x + step)[0] - forward_batch(net, x - step)[0]) / (2 * h))
    numeric = np.stack(columns, axis=1)
    exact = point_jacobian(net, x)
    assert np.max(np.abs(exact - numeric)) / np.max(np.abs(exact)) < 1e-6


@pytest.mark.parametrize("seed", range(5))
def test_jacobian_interval_contains_sampled_jacobians(seed):
    net = generate_network(seed, [2, 6, 2], activation="tanh" if seed % 2 else "sigmoid")
    rng = np.random.default_rng(seed)
    for cell in (Box([-0.2, 0.1], [0.1, 0.3]), Box([0.5, -1.0], [1.0, -0.4])):
        jac = jacobian_interval(net, cell)
        samples = jacobian_batch(net, uniform_points(cell, 1000, rng))
        assert np.all(samples >= jac.lo) and np.all(samples <= jac.hi)
