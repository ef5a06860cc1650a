import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.lines import Line2D  # noqa: E402
from matplotlib.patches import Patch, Rectangle  # noqa: E402

from setreach.exceptions import PlotError  # noqa: E402
from setreach.utils.settings import PlotColors  # noqa: E402

logger = logging.getLogger(__name__)

LAYERS = ("full", "boundary")


def _projection(dim, proj):
    if proj is None:
        if dim != 2:
            raise PlotError(f"data has {dim} output dims; choose two with --proj i j")
        return 0, 1
    i, j = (int(p) for p in proj)
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        raise PlotError(f"invalid projection ({i}, {j}) for {dim}-dim data")
    return i, j


def _data_dim(full, boundary, mc_points, safe):
    dims = set()
    for bounds in (full, boundary):
        if bounds is not None and bounds[0].size:
            dims.add(bounds[0].shape[1])
    if mc_points is not None and mc_points.size:
        dims.add(mc_points.shape[1])
    if safe is not None:
        dims.add(safe.dim)
    if len(dims) > 1:
        raise PlotError(f"plot inputs disagree on the output dimension: {sorted(dims)}")
    return dims.pop() if dims else 2


def plot_reach(path, full=None, boundary=None, mc_points=None, safe=None, proj=None, colors=None):
    """
    Draw reach cells, Monte-Carlo images and the safe box as an SVG.

    ``full`` and ``boundary`` are ``(out_lo, out_hi)`` arrays; each cell is a
    rectangle in group ``reach-<layer>-<n>``. The file is byte-identical for
    identical inputs.

    Raises:
        PlotError: If the data is not 2-dim and no projection is given.
    """
    colors = colors or PlotColors()
    i, j = _projection(_data_dim(full, boundary, mc_points, safe), proj)
    rc = {"svg.hashsalt": colors.hashsalt, "svg.fonttype": "none", "path.simplify": False}

    with plt.rc_context(rc):
        fig, ax = plt.subplots(figsize=(6, 6))
        layer_colors = {"full": colors.full, "boundary": colors.boundary}
        for layer, bounds in zip(LAYERS, (full, boundary)):
            if bounds is None:
                continue
            out_lo, out_hi = bounds
            for n in range(out_lo.shape[0]):
                rect = Rectangle(
                    (out_lo[n, i], out_lo[n, j]),
                    out_hi[n, i] - out_lo[n, i],
                    out_hi[n, j] - out_lo[n, j],
                    facecolor=layer_colors[layer],
                    edgecolor=layer_colors[layer],
                    linewidth=0.3,
                    alpha=0.6,
                )
                rect.set_gid(f"reach-{layer}-{n}")
                ax.add_patch(rect)
        if mc_points is not None and mc_points.size:
            dots = ax.scatter(mc_points[:, i], mc_points[:, j], s=1.0, color=colors.mc, zorder=3)
            dots.set_gid("mc-points")
        if safe is not None:
            outline = Rectangle(
                (safe.lo[i], safe.lo[j]),
                safe.hi[i] - safe.lo[i],
                safe.hi[j] - safe.lo[j],
                fill=False,
                edgecolor=colors.safe,
                linewidth=1.5,
                zorder=4,
            )
            outline.set_gid("safe-set")
            ax.add_patch(outline)

        ax.autoscale_view()
        ax.set_xlabel(f"y{i + 1}")
        ax.set_ylabel(f"y{j + 1}")
        handles = [
            Patch(color=colors.full, label="full set"),
            Patch(color=colors.boundary, label="boundary / subset"),
            Patch(facecolor="none", edgecolor=colors.safe, label="safe set"),
            Line2D([], [], marker=".", linestyle="none", color=colors.mc, label="Monte-Carlo"),
        ]
        ax.legend(handles=handles, loc="upper right", fontsize="small")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.info(f"Plot written to {path}")
    return i, j
