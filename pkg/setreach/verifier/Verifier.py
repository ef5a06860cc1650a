import logging
import time
from dataclasses import asdict, dataclass, field, replace
from enum import Enum

import numpy as np

from setreach.domains.ReachSet import Domain, propagate_cells
from setreach.exceptions import DimensionMismatchError, ProblemSpecError, SetReachError
from setreach.interval.Box import Box, hull_of_bounds
from setreach.interval.IntervalMatrix import MAX_DET_DIM
from setreach.network.Network import forward_point
from setreach.topology.CellGrid import boundary_grids, partition
from setreach.topology.Certifier import certify_homeomorphism, extract_subset

from .MonteCarlo import monte_carlo

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    BOUNDARY = "boundary"
    SUBSET = "subset"
    FULL = "full"
    AUTO = "auto"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            modes = ", ".join(m.value for m in cls)
            raise ProblemSpecError(f"unknown mode '{value}', expected one of {modes}") from None


class Status(str, Enum):
    SAFE = "safe"
    UNKNOWN = "unknown"
    FALSIFIED = "falsified"


@dataclass(frozen=True, eq=False)
class VerificationProblem:
    """
    Network, input box, box-shaped safe set and the knobs of one verification run.

    ``grid`` holds one count per input dim; a single count is broadcast.
    """

    net: object
    input: Box
    safe: Box
    domain: Domain = Domain.BOX
    mode: Mode = Mode.AUTO
    grid: tuple = (10,)
    max_refinements: int = 3
    falsify_samples: int = 0
    seed: int = 0
    n_jobs: int = 1
    chunk_size: int = 2048

    def __post_init__(self):
        if self.input.dim != self.net.input_dim:
            raise DimensionMismatchError(
                f"input box has {self.input.dim} dims, network expects {self.net.input_dim}"
            )
        if self.safe.dim != self.net.output_dim:
            raise DimensionMismatchError(
                f"safe box has {self.safe.dim} dims, network outputs {self.net.output_dim}"
            )
        grid = (self.grid,) if np.isscalar(self.grid) else tuple(self.grid)
        grid = tuple(int(c) for c in grid)
        if len(grid) == 1:
            grid = grid * self.input.dim
        if len(grid) != self.input.dim:
            raise DimensionMismatchError(f"{len(grid)} grid counts for a {self.input.dim}-dim input")
        if any(c < 1 for c in grid):
            raise ProblemSpecError(f"grid counts must be >= 1, got {grid}")
        if self.max_refinements < 0:
            raise ProblemSpecError(f"max_refinements must be >= 0, got {self.max_refinements}")
        if self.falsify_samples < 0:
            raise ProblemSpecError(f"falsify_samples must be >= 0, got {self.falsify_samples}")
        if self.seed < 0:
            raise ProblemSpecError(f"seed must be >= 0, got {self.seed}")
        if self.n_jobs == 0 or self.chunk_size < 1:
            raise ProblemSpecError(f"invalid parallel settings n_jobs={self.n_jobs} chunk_size={self.chunk_size}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "domain", Domain.parse(self.domain))
        object.__setattr__(self, "mode", Mode.parse(self.mode))

    def refined(self, level):
        return replace(self, grid=tuple(c * 2**level for c in self.grid))

    def full_counts(self):
        return tuple(1 if self.input.lo[k] == self.input.hi[k] else c for k, c in enumerate(self.grid))


@dataclass
class VerificationStats:
    mode: str = ""
    cells_total: int = 0
    cells_propagated: int = 0
    cells_certified: int = 0
    cells_kept: int = 0
    refinement_level: int = 0
    wall_time: float = 0.0
    assumes_invertible: bool = False
    homeomorphism_certified: bool | None = None
    fallback_full: bool = False

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True, eq=False)
class CellReach:
    """Per-cell output hulls of one run, in propagation order."""

    indices: np.ndarray
    faces: np.ndarray
    out_lo: np.ndarray
    out_hi: np.ndarray

    def __len__(self):
        return int(self.indices.shape[0])


@dataclass(eq=False)
class Verdict:
    status: Status
    stats: VerificationStats = field(default_factory=VerificationStats)
    output_hull: Box | None = None
    counterexample: np.ndarray | None = None
    cells: CellReach | None = None

    @property
    def is_safe(self):
        return self.status is Status.SAFE


def check_inclusion(sets, safe):
    """
    True iff the interval hull of every reach set lies inside ``safe``.

    Raises:
        DimensionMismatchError: If a set and the safe box differ in dimension.
    """
    for reach in sets:
        hull = reach.hull()
        if hull.dim != safe.dim:
            raise DimensionMismatchError(f"reach set has {hull.dim} dims, safe set {safe.dim}")
        if not safe.contains(hull):
            return False
    return True


def bounds_inside(out_lo, out_hi, safe):
    if out_lo.shape[-1] != safe.dim:
        raise DimensionMismatchError(f"reach bounds have {out_lo.shape[-1]} dims, safe set {safe.dim}")
    return bool(np.all(out_lo >= safe.lo) and np.all(out_hi <= safe.hi))


def _assemble(problem, stats, started, indices, faces, out_lo, out_hi):
    stats.cells_propagated = int(out_lo.shape[0])
    stats.wall_time = time.perf_counter() - started
    status = Status.SAFE if bounds_inside(out_lo, out_hi, problem.safe) else Status.UNKNOWN
    hull = hull_of_bounds(out_lo, out_hi) if out_lo.shape[0] else None
    verdict = Verdict(status, stats, hull, cells=CellReach(indices, faces, out_lo, out_hi))
    logger.info(
        f"{stats.mode}: {stats.cells_propagated} cells propagated ({problem.domain.value}), "
        f"verdict {status.value}, hull {hull}"
    )
    return verdict


def falsify(problem, verdict):
    """
    Promote an Unknown verdict to Falsified when a sampled input maps outside
    the safe set. Candidates are re-checked one at a time with an exact forward pass.
    """
    if verdict.status is not Status.UNKNOWN or problem.falsify_samples < 1:
        return verdict
    result = monte_carlo(problem.net, problem.input, problem.falsify_samples, problem.seed, safe=problem.safe)
    for x in result.violation_points:
        if not problem.safe.contains(forward_point(problem.net, x)):
            logger.info(f"Counterexample found: {x.tolist()}")
            verdict.status = Status.FALSIFIED
            verdict.counterexample = np.array(x)
            break
    return verdict


def verify_boundary(problem):
    """
    Propagate a partition of every face of the input box.

    Safe is only meaningful when the network is a homeomorphism on the input;
    this is not checked here and ``assumes_invertible`` is set in the stats.
    """
    started = time.perf_counter()
    stats = VerificationStats(mode=Mode.BOUNDARY.value, assumes_invertible=True)
    grids = boundary_grids(problem.input, problem.grid)
    lows, highs, indices, faces = [], [], [], []
    for face_no, grid in enumerate(grids):
        face_indices = grid.indices()
        lo, hi = grid.bounds(face_indices)
        lows.append(lo)
        highs.append(hi)
        indices.append(face_indices)
        faces.append(np.full(len(grid), face_no))
    lows, highs = np.concatenate(lows), np.concatenate(highs)
    stats.cells_total = int(lows.shape[0])
    out_lo, out_hi = propagate_cells(
        problem.net, lows, highs, problem.domain, n_jobs=problem.n_jobs, chunk_size=problem.chunk_size
    )
    verdict = _assemble(
        problem, stats, started, np.concatenate(indices), np.concatenate(faces), out_lo, out_hi
    )
    return falsify(problem, verdict)


def verify_full(problem):
    """Propagate every cell of a uniform grid over the whole input box."""
    started = time.perf_counter()
    stats = VerificationStats(mode=Mode.FULL.value)
    grid = partition(problem.input, problem.full_counts())
    indices = grid.indices()
    lows, highs = grid.bounds(indices)
    stats.cells_total = stats.cells_kept = len(grid)
    out_lo, out_hi = propagate_cells(
        problem.net, lows, highs, problem.domain, n_jobs=problem.n_jobs, chunk_size=problem.chunk_size
    )
    verdict = _assemble(problem, stats, started, indices, np.full(len(grid), -1), out_lo, out_hi)
    return falsify(problem, verdict)


def verify_subset(problem):
    """
    Drop certified interior cells and propagate the rest.

    The kept cells cover the closure of the input minus the certified subset,
    which contains the whole boundary of the input. Networks that cannot be
    certified fall back to ``verify_full``.
    """
    net = problem.net
    if not net.is_square or net.input_dim > MAX_DET_DIM or problem.input.is_degenerate():
        logger.warning(
            f"Subset extraction is unavailable for {net} on {problem.input}; falling back to the full grid"
        )
        verdict = verify_full(problem)
        verdict.stats.fallback_full = True
        return verdict

    started = time.perf_counter()
    stats = VerificationStats(mode=Mode.SUBSET.value)
    extraction = extract_subset(
        net, problem.input, problem.grid, n_jobs=problem.n_jobs, chunk_size=problem.chunk_size
    )
    removed_on_boundary = extraction.a_mask & extraction.grid.touches_boundary(extraction.indices)
    if np.any(removed_on_boundary):
        raise SetReachError("subset extraction removed a cell on the input boundary")
    stats.cells_total = extraction.counts["total"]
    stats.cells_certified = extraction.counts["certified"]
    stats.cells_kept = extraction.counts["kept"]

    kept = extraction.kept_cells
    lows, highs = extraction.grid.bounds(kept)
    out_lo, out_hi = propagate_cells(
        net, lows, highs, problem.domain, n_jobs=problem.n_jobs, chunk_size=problem.chunk_size
    )
    verdict = _assemble(problem, stats, started, kept, np.full(kept.shape[0], -1), out_lo, out_hi)
    return falsify(problem, verdict)


def _choose_path(problem):
    net = problem.net
    if not net.is_square or net.input_dim > MAX_DET_DIM or problem.input.is_degenerate():
        return verify_subset, None
    certificate = certify_homeomorphism(net, problem.input)
    logger.info(
        f"Whole-input Jacobian determinant {certificate.det_interval}; "
        f"{'boundary' if certificate.certified else 'subset'} path"
    )
    return (verify_boundary if certificate.certified else verify_subset), certificate.certified


def verify_auto(problem):
    """
    Certify the network on the whole input, then run the boundary path when that
    succeeds and the subset path otherwise. Unknown verdicts are retried with
    every grid count doubled, up to ``max_refinements`` times.
    """
    started = time.perf_counter()
    runner, certified = _choose_path(problem)
    quiet = replace(problem, falsify_samples=0)
    verdict = None
    for level in range(problem.max_refinements + 1):
        verdict = runner(quiet.refined(level))
        verdict.stats.refinement_level = level
        if verdict.is_safe:
            break
        logger.info(f"Refinement level {level} inconclusive")

    verdict.stats.homeomorphism_certified = certified
    if certified:
        verdict.stats.assumes_invertible = False
    verdict = falsify(problem, verdict)
    verdict.stats.wall_time = time.perf_counter() - started
    return verdict


RUNNERS = {
    Mode.BOUNDARY: verify_boundary,
    Mode.SUBSET: verify_subset,
    Mode.FULL: verify_full,
    Mode.AUTO: verify_auto,
}


def verify(problem):
    return RUNNERS[problem.mode](problem)


def compare_modes(problem):
    """
    Run boundary, subset and full on the same grid (equal per-cell width).

    Returns:
        A dict mode name -> Verdict, in that order.
    """
    results = {}
    for mode in (Mode.BOUNDARY, Mode.SUBSET, Mode.FULL):
        results[mode.value] = RUNNERS[mode](replace(problem, mode=mode))
    return results


def time_reduction(verdict, baseline):
    """Relative wall-time saving of ``verdict`` against ``baseline``, in [.., 1]."""
    if baseline.stats.wall_time <= 0.0:
        return 0.0
    return 1.0 - verdict.stats.wall_time / baseline.stats.wall_time
