import numpy as np
import pytest
from typer.testing import CliRunner

from main import app
from setreach.exceptions import PlotError, ProblemSpecError
from setreach.interval import Box
from setreach.reports import plot_reach, read_cells_csv
from setreach.utils import PlotColors

UNIT_CELL = (np.array([[0.0, 0.0]]), np.array([[1.0, 1.0]]))


def test_empty_plot_is_valid_svg(tmp_path):
    path = tmp_path / "empty.svg"
    plot_reach(str(path))
    text = path.read_text()
    assert text.lstrip().startswith("<?xml")
    assert "<svg" in text and "</svg>" in text
    assert "reach-" not in text


def test_one_cell_gives_one_rectangle(tmp_path):
    path = tmp_path / "one.svg"
    plot_reach(str(path), full=UNIT_CELL)
    text = path.read_text()
    assert text.count('id="reach-full-') == 1
    assert 'id="reach-boundary-' not in text


def test_layers_safe_set_and_samples_are_tagged(tmp_path):
    path = tmp_path / "all.svg"
    boundary = (np.array([[0.0, 0.0], [0.5, 0.5]]), np.array([[0.5, 0.5], [1.0, 1.0]]))
    points = np.array([[0.2, 0.3], [0.7, 0.1]])
    plot_reach(str(path), full=UNIT_CELL, boundary=boundary, mc_points=points, safe=Box([-1, -1], [2, 2]))
    text = path.read_text()
    assert text.count('id="reach-boundary-') == 2
    assert 'id="safe-set"' in text
    assert 'id="mc-points"' in text


def test_plot_is_byte_identical_across_runs(tmp_path):
    outputs = []
    for name in ("a.svg", "b.svg"):
        path = tmp_path / name
        plot_reach(str(path), full=UNIT_CELL, safe=Box([0, 0], [2, 2]), colors=PlotColors())
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_colors_come_from_settings(tmp_path):
    path = tmp_path / "c.svg"
    plot_reach(str(path), full=UNIT_CELL, colors=PlotColors(full="#123456"))
    assert "#123456" in path.read_text()


def test_projection_is_required_above_two_dims(tmp_path):
    cells = (np.zeros((1, 3)), np.ones((1, 3)))
    with pytest.raises(PlotError):
        plot_reach(str(tmp_path / "x.svg"), full=cells)
    with pytest.raises(PlotError):
        plot_reach(str(tmp_path / "x.svg"), full=cells, proj=(1, 1))
    with pytest.raises(PlotError):
        plot_reach(str(tmp_path / "x.svg"), full=cells, proj=(0, 3))
    assert plot_reach(str(tmp_path / "x.svg"), full=cells, proj=(0, 2)) == (0, 2)


def test_mismatched_inputs(tmp_path):
    with pytest.raises(PlotError):
        plot_reach(str(tmp_path / "x.svg"), full=UNIT_CELL, safe=Box([0, 0, 0], [1, 1, 1]))


def test_read_cells_csv_rejects_other_files(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ProblemSpecError):
        read_cells_csv(str(path))


def test_plot_command_end_to_end(tmp_path):
    runner = CliRunner()
    model = tmp_path / "net.json"
    cells = tmp_path / "cells.csv"
    samples = tmp_path / "mc.csv"
    svg = tmp_path / "plot.svg"
    assert runner.invoke(app, ["generate", "--seed", "2", "--dims", "2,5,2", "--scale", "0.5", "--out", str(model)]).exit_code == 0
    common = ["--model", str(model), "--input", "0,1;0,1"]
    verify = runner.invoke(app, ["verify", *common, "--safe", "-5,5;-5,5", "--mode", "full", "--grid", "4", "--cells-out", str(cells)])
    assert verify.exit_code == 0
    assert runner.invoke(app, ["mc", *common, "--samples", "200", "--out", str(samples)]).exit_code == 0
    result = runner.invoke(
        app, ["plot", "--full", str(cells), "--mc", str(samples), "--safe", "-5,5;-5,5", "--out", str(svg)]
    )
    assert result.exit_code == 0, result.output
    assert svg.read_text().count('id="reach-full-') == 16


def test_plot_command_needs_projection_for_3d(tmp_path):
    cells = tmp_path / "cells.csv"
    cells.write_text("idx0,out0_lo,out0_hi,out1_lo,out1_hi,out2_lo,out2_hi\n0,0,1,0,1,0,1\n")
    runner = CliRunner()
    result = runner.invoke(app, ["plot", "--full", str(cells), "--out", str(tmp_path / "p.svg")])
    assert result.exit_code == 3
    result = runner.invoke(app, ["plot", "--full", str(cells), "--proj", "0", "2", "--out", str(tmp_path / "p.svg")])
    assert result.exit_code == 0
