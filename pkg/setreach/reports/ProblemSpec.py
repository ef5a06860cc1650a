import logging
import os
from dataclasses import dataclass

from setreach.exceptions import ProblemSpecError, SetReachError
from setreach.interval.Box import Box
from setreach.network.generate import generate_network
from setreach.network.ModelLoader import load_network
from setreach.utils.ReadFiles import read_config
from setreach.verifier.Verifier import Mode, VerificationProblem

logger = logging.getLogger(__name__)

PROBLEM_KEYS = (
    "model",
    "input",
    "safe",
    "domain",
    "mode",
    "grid",
    "max_refine",
    "falsify_samples",
    "seed",
    "n_jobs",
    "chunk_size",
    "out",
    "cells_out",
)


def parse_box(value):
    """
    Parse a box from ``"lo,hi;lo,hi;..."`` or from a list of ``[lo, hi]`` pairs.

    Raises:
        ProblemSpecError: If the text is malformed or an interval is inverted.
    """
    if isinstance(value, Box):
        return value
    try:
        if isinstance(value, str):
            pairs = [[float(v) for v in part.split(",")] for part in value.split(";") if part.strip()]
        else:
            pairs = [[float(v) for v in pair] for pair in value]
        return Box.from_pairs(pairs)
    except (TypeError, ValueError) as e:
        raise ProblemSpecError(f"invalid box {value!r}: {e}") from e


def parse_grid(value):
    """Parse ``"k"`` or ``"k1,k2,..."`` (or an int / list) into a tuple of counts."""
    try:
        if isinstance(value, int):
            counts = (value,)
        elif isinstance(value, str):
            counts = tuple(int(v) for v in value.split(",") if v.strip())
        else:
            counts = tuple(int(v) for v in value)
    except (TypeError, ValueError) as e:
        raise ProblemSpecError(f"invalid grid {value!r}: {e}") from e
    if not counts or any(c < 1 for c in counts):
        raise ProblemSpecError(f"grid counts must be positive integers, got {value!r}")
    return counts


@dataclass(frozen=True)
class ProblemSpec:
    """
    Everything a CLI run needs, merged from flags, a problem file and settings.

    ``model`` is a path to a model JSON file or an inline
    ``{"generate": {...}}`` mapping passed to ``generate_network``.
    """

    model: object
    input: Box
    safe: Box | None = None
    domain: str = "box"
    mode: str = "auto"
    grid: tuple = (10,)
    max_refine: int = 3
    falsify_samples: int = 0
    seed: int = 0
    n_jobs: int = 1
    chunk_size: int = 2048
    out: str | None = None
    cells_out: str | None = None

    def __post_init__(self):
        if isinstance(self.model, dict):
            if set(self.model) != {"generate"} or not isinstance(self.model["generate"], dict):
                raise ProblemSpecError("an inline model must be a single {generate: {...}} mapping")
        elif not os.path.isfile(str(self.model)):
            raise ProblemSpecError(f"model file not found: {self.model}")
        Mode.parse(self.mode)

    def load_model(self):
        if isinstance(self.model, dict):
            options = dict(self.model["generate"])
            try:
                return generate_network(**options)
            except SetReachError:
                raise
            except (TypeError, ValueError) as e:
                raise ProblemSpecError(f"invalid generate block {options}: {e}") from e
        return load_network(str(self.model))

    def require_safe(self):
        if self.safe is None:
            raise ProblemSpecError("a safe box is required (--safe or 'safe' in the problem file)")
        return self.safe

    def to_problem(self, net=None):
        net = net or self.load_model()
        return VerificationProblem(
            net=net,
            input=self.input,
            safe=self.require_safe(),
            domain=self.domain,
            mode=self.mode,
            grid=self.grid,
            max_refinements=self.max_refine,
            falsify_samples=self.falsify_samples,
            seed=self.seed,
            n_jobs=self.n_jobs,
            chunk_size=self.chunk_size,
        )


def read_problem_file(path):
    """
    Read a YAML problem file. A relative ``model`` path is resolved against the
    directory of the file.
    """
    document = read_config(path)
    unknown = set(document) - set(PROBLEM_KEYS) - {"name", "description"}
    if unknown:
        raise ProblemSpecError(f"unknown keys in {path}: {sorted(unknown)}")
    model = document.get("model")
    if isinstance(model, str) and not os.path.isabs(model):
        document["model"] = os.path.join(os.path.dirname(os.path.abspath(path)), model)
    return document


def build_spec(settings, problem_file=None, **flags):
    """
    Merge explicit flags over a problem file over ``settings``.

    Flags whose value is ``None`` are treated as not given.
    """
    values = {
        "domain": settings.domain,
        "mode": settings.mode,
        "grid": settings.grid,
        "max_refine": settings.max_refinements,
        "falsify_samples": settings.falsify_samples,
        "seed": settings.seed,
        "n_jobs": settings.n_jobs,
        "chunk_size": settings.chunk_size,
    }
    if problem_file:
        values.update(read_problem_file(problem_file))
        logger.debug(f"Loaded problem file {problem_file}")
    values.update({k: v for k, v in flags.items() if v is not None})
    values = {k: v for k, v in values.items() if k in PROBLEM_KEYS}

    if values.get("model") is None:
        raise ProblemSpecError("no model given (--model or 'model' in the problem file)")
    if values.get("input") is None:
        raise ProblemSpecError("no input box given (--input or 'input' in the problem file)")
    values["input"] = parse_box(values["input"])
    if values.get("safe") is not None:
        values["safe"] = parse_box(values["safe"])
    values["grid"] = parse_grid(values["grid"])
    for key in ("max_refine", "falsify_samples", "seed", "n_jobs", "chunk_size"):
        try:
            values[key] = int(values[key])
        except (TypeError, ValueError) as e:
            raise ProblemSpecError(f"'{key}' must be an integer, got {values[key]!r}") from e
    if values["seed"] < 0:
        raise ProblemSpecError(f"seed must be a non-negative integer, got {values['seed']}")
    try:
        return ProblemSpec(**values)
    except TypeError as e:
        raise ProblemSpecError(f"invalid problem specification: {e}") from e
