import logging

import jsonschema
import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table

from setreach.exceptions import ProblemSpecError
from setreach.utils.ReadFiles import read_doc, write_doc

logger = logging.getLogger(__name__)

EXIT_CODES = {"safe": 0, "unknown": 1, "falsified": 2}
EXIT_ERROR = 3

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["status", "stats", "output_hull", "counterexample"],
    "properties": {
        "status": {"enum": list(EXIT_CODES)},
        "stats": {
            "type": "object",
            "required": ["cells", "certified", "kept", "refinement_level", "wall_ms"],
            "properties": {
                "cells": {"type": "integer", "minimum": 0},
                "certified": {"type": "integer", "minimum": 0},
                "kept": {"type": "integer", "minimum": 0},
                "refinement_level": {"type": "integer", "minimum": 0},
                "wall_ms": {"type": "number", "minimum": 0},
                "mode": {"type": "string"},
                "assumes_invertible": {"type": "boolean"},
                "fallback_full": {"type": "boolean"},
                "homeomorphism_certified": {"type": ["boolean", "null"]},
            },
        },
        "output_hull": {"anyOf": [{"type": "array", "items": _PAIR}, {"type": "null"}]},
        "counterexample": {"anyOf": [{"type": "array", "items": {"type": "number"}}, {"type": "null"}]},
        "refinement_level": {"type": "integer"},
    },
}


def verdict_document(verdict):
    stats = verdict.stats
    return {
        "status": verdict.status.value,
        "stats": {
            "cells": stats.cells_propagated,
            "certified": stats.cells_certified,
            "kept": stats.cells_kept,
            "refinement_level": stats.refinement_level,
            "wall_ms": round(stats.wall_time * 1000.0, 3),
            "mode": stats.mode,
            "assumes_invertible": stats.assumes_invertible,
            "fallback_full": stats.fallback_full,
            "homeomorphism_certified": stats.homeomorphism_certified,
        },
        "output_hull": verdict.output_hull.to_pairs() if verdict.output_hull is not None else None,
        "counterexample": (
            [float(v) for v in verdict.counterexample] if verdict.counterexample is not None else None
        ),
        "refinement_level": stats.refinement_level,
    }


def check_verdict_document(document):
    try:
        jsonschema.validate(document, VERDICT_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ProblemSpecError(f"verdict document does not match the schema: {e.message}") from e
    return document


def write_verdict(verdict, path):
    document = check_verdict_document(verdict_document(verdict))
    write_doc(path, document)
    logger.info(f"Verdict written to {path}")
    return document


def read_verdict(path):
    return check_verdict_document(read_doc(path))


def exit_code(verdict):
    return EXIT_CODES[verdict.status.value]


def _index_columns(n):
    return [f"idx{k}" for k in range(n)]


def cells_frame(verdict):
    """Per-cell reach hulls: ``idx0..idx{n-1}, out0_lo, out0_hi, ...``."""
    cells = verdict.cells
    n_in = cells.indices.shape[1]
    n_out = cells.out_lo.shape[1]
    frame = pd.DataFrame(cells.indices, columns=_index_columns(n_in))
    for k in range(n_out):
        frame[f"out{k}_lo"] = cells.out_lo[:, k]
        frame[f"out{k}_hi"] = cells.out_hi[:, k]
    return frame


def write_cells_csv(verdict, path):
    frame = cells_frame(verdict)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"{len(frame)} reach cells written to {path}")
    return frame


def read_cells_csv(path):
    """
    Read a cell CSV back into ``(out_lo, out_hi)`` arrays of shape (N, m).

    Raises:
        ProblemSpecError: If the file is missing or lacks ``out*_lo``/``out*_hi`` columns.
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as e:
        raise ProblemSpecError(f"cannot read cell CSV {path}: {e}") from e
    except pd.errors.EmptyDataError:
        return np.empty((0, 0)), np.empty((0, 0))
    n_out = sum(1 for c in frame.columns if c.startswith("out") and c.endswith("_lo"))
    columns = [(f"out{k}_lo", f"out{k}_hi") for k in range(n_out)]
    if n_out == 0 or any(lo not in frame or hi not in frame for lo, hi in columns):
        raise ProblemSpecError(f"{path} is not a cell CSV (expected out0_lo, out0_hi, ... columns)")
    out_lo = frame[[lo for lo, _ in columns]].to_numpy(dtype=float)
    out_hi = frame[[hi for _, hi in columns]].to_numpy(dtype=float)
    return out_lo, out_hi


def certification_frame(extraction):
    """Per-cell determinant bounds: ``idx0..idx{n-1}, det_lo, det_hi, certified``."""
    frame = pd.DataFrame(extraction.indices, columns=_index_columns(extraction.indices.shape[1]))
    frame["det_lo"] = extraction.det_lo
    frame["det_hi"] = extraction.det_hi
    frame["certified"] = extraction.certified_mask.astype(int)
    return frame


def mc_frame(result):
    return pd.DataFrame(result.images, columns=[f"out{k}" for k in range(result.images.shape[1])])


def read_mc_csv(path):
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ProblemSpecError(f"cannot read sample CSV {path}: {e}") from e
    columns = [c for c in frame.columns if c.startswith("out") and c[3:].isdigit()]
    if not columns:
        raise ProblemSpecError(f"{path} is not a sample CSV (expected out0, out1, ... columns)")
    return frame[sorted(columns, key=lambda c: int(c[3:]))].to_numpy(dtype=float)


def mc_summary(result, seed):
    return {
        "samples": int(result.points.shape[0]),
        "seed": int(seed),
        "image_hull": result.image_hull.to_pairs(),
        "violations": result.n_violations,
        "violation_points": result.violation_points.tolist(),
    }


def compare_frame(results):
    """
    One row per mode with cell accounting, verdict, time and hull. The last
    column is the wall-time reduction against the full run.
    """
    baseline = results.get("full")
    rows = []
    for mode, verdict in results.items():
        stats = verdict.stats
        reduction = None
        if baseline is not None and baseline.stats.wall_time > 0:
            reduction = 1.0 - stats.wall_time / baseline.stats.wall_time
        rows.append(
            {
                "mode": mode,
                "ran_as": stats.mode,
                "cells": stats.cells_propagated,
                "total": stats.cells_total,
                "certified": stats.cells_certified,
                "kept": stats.cells_kept,
                "verdict": verdict.status.value,
                "time_ms": round(stats.wall_time * 1000.0, 3),
                "hull": verdict.output_hull.to_pairs() if verdict.output_hull is not None else None,
                "time_reduction": reduction,
            }
        )
    return pd.DataFrame(rows)


def _fmt(value):
    if isinstance(value, float):
        return "-" if np.isnan(value) else f"{value:.6g}"
    if value is None:
        return "-"
    if isinstance(value, list):
        return " x ".join(f"[{lo:.4g}, {hi:.4g}]" for lo, hi in value)
    return str(value)


def print_table(frame, title, console=None):
    console = console or Console()
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column))
    for row in frame.itertuples(index=False):
        table.add_row(*(_fmt(v) for v in row))
    console.print(table)
