import json
import logging
from typing import Optional, Tuple

import pandas as pd
import typer
from rich.console import Console

from setreach.exceptions import ProblemSpecError, SetReachError, UnsupportedDimensionError
from setreach.network import generate_network, save_network
from setreach.reports import (
    EXIT_ERROR,
    build_spec,
    certification_frame,
    compare_frame,
    exit_code,
    mc_frame,
    mc_summary,
    parse_box,
    parse_grid,
    plot_reach,
    print_table,
    read_cells_csv,
    read_mc_csv,
    verdict_document,
    write_cells_csv,
    write_verdict,
)
from setreach.topology import extract_subset
from setreach.utils import init_logging_config, load_settings, write_doc
from setreach.verifier import compare_modes, monte_carlo, verify

app = typer.Typer(add_completion=False, help="Set-boundary reachability verification for smooth feedforward networks.")
logger = logging.getLogger("setreach.cli")
err_console = Console(stderr=True)

ProblemOpt = typer.Option(None, "--problem", help="YAML problem file; flags override its values.")
ModelOpt = typer.Option(None, "--model", help="Model JSON file.")
InputOpt = typer.Option(None, "--input", help='Input box, e.g. "0,1;0,1".')
SafeOpt = typer.Option(None, "--safe", help='Safe box, e.g. "-1,2;-1,2".')
DomainOpt = typer.Option(None, "--domain", help="box | zono")
GridOpt = typer.Option(None, "--grid", help="Cells per dim: k or k1,k2,...")
MaxRefineOpt = typer.Option(None, "--max-refine", help="Grid doublings after Unknown (auto mode).")
SeedOpt = typer.Option(None, "--seed", help="Seed for Monte-Carlo sampling.")
FalsifyOpt = typer.Option(None, "--falsify-samples", help="Monte-Carlo samples to search for a counterexample.")
JobsOpt = typer.Option(None, "--n-jobs", help="joblib workers for cell propagation.")


def _fail(e):
    logger.error(f"{type(e).__name__}: {e}")
    err_console.print(f"[bold red]error:[/] {e}")
    raise typer.Exit(EXIT_ERROR)


def _spec(ctx, problem, **flags):
    return build_spec(ctx.obj, problem_file=problem, **flags)


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[str] = typer.Option(None, "--config", help="Settings YAML (default: SETREACH_CONFIG or the packaged config.yml)."),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR."),
    log_file: Optional[str] = typer.Option(None, "--log-file", help="Also write the log to this file."),
):
    try:
        settings = load_settings(config)
    except SetReachError as e:
        err_console.print(f"[bold red]error:[/] {e}")
        raise typer.Exit(EXIT_ERROR)
    init_logging_config(
        basic_log_level=log_level or settings.log_level,
        filename=log_file or settings.log_file,
    )
    ctx.obj = settings


@app.command("verify")
def cmd_verify(
    ctx: typer.Context,
    problem: Optional[str] = ProblemOpt,
    model: Optional[str] = ModelOpt,
    input: Optional[str] = InputOpt,
    safe: Optional[str] = SafeOpt,
    domain: Optional[str] = DomainOpt,
    mode: Optional[str] = typer.Option(None, "--mode", help="boundary | subset | full | auto"),
    grid: Optional[str] = GridOpt,
    max_refine: Optional[int] = MaxRefineOpt,
    seed: Optional[int] = SeedOpt,
    falsify_samples: Optional[int] = FalsifyOpt,
    n_jobs: Optional[int] = JobsOpt,
    out: Optional[str] = typer.Option(None, "--out", help="Verdict JSON path (default: standard output)."),
    cells_out: Optional[str] = typer.Option(None, "--cells-out", help="Per-cell reach CSV path."),
):
    """Verify that the network maps the input box into the safe box."""
    try:
        spec = _spec(
            ctx, problem, model=model, input=input, safe=safe, domain=domain, mode=mode, grid=grid,
            max_refine=max_refine, seed=seed, falsify_samples=falsify_samples, n_jobs=n_jobs,
            out=out, cells_out=cells_out,
        )
        verdict = verify(spec.to_problem())
        if spec.out:
            write_verdict(verdict, spec.out)
        else:
            typer.echo(json.dumps(verdict_document(verdict), indent=2))
        if spec.cells_out:
            write_cells_csv(verdict, spec.cells_out)
    except (ValueError, OSError) as e:
        _fail(e)
    raise typer.Exit(exit_code(verdict))


@app.command("compare")
def cmd_compare(
    ctx: typer.Context,
    problem: Optional[str] = ProblemOpt,
    model: Optional[str] = ModelOpt,
    input: Optional[str] = InputOpt,
    safe: Optional[str] = SafeOpt,
    domain: Optional[str] = DomainOpt,
    grid: Optional[str] = GridOpt,
    n_jobs: Optional[int] = JobsOpt,
    out: Optional[str] = typer.Option(None, "--out", help="Write the comparison table as CSV."),
):
    """Run boundary, subset and full modes at the same cell width."""
    try:
        spec = _spec(ctx, problem, model=model, input=input, safe=safe, domain=domain, grid=grid, n_jobs=n_jobs)
        frame = compare_frame(compare_modes(spec.to_problem()))
        print_table(frame, f"Mode comparison, grid {spec.grid}")
        if out:
            frame.to_csv(out, index=False)
    except (ValueError, OSError) as e:
        _fail(e)


@app.command("certify")
def cmd_certify(
    ctx: typer.Context,
    problem: Optional[str] = ProblemOpt,
    model: Optional[str] = ModelOpt,
    input: Optional[str] = InputOpt,
    grid: Optional[str] = GridOpt,
    n_jobs: Optional[int] = JobsOpt,
    out: Optional[str] = typer.Option(None, "--out", help="Per-cell certification CSV path."),
):
    """Certify local homeomorphism cell by cell via interval Jacobian determinants."""
    try:
        spec = _spec(ctx, problem, model=model, input=input, grid=grid, n_jobs=n_jobs)
        net = spec.load_model()
        if not net.is_square:
            raise UnsupportedDimensionError(f"certification needs a square network, got {net}")
        counts = spec.grid[0] if len(spec.grid) == 1 else spec.grid
        extraction = extract_subset(net, spec.input, counts, n_jobs=spec.n_jobs, chunk_size=spec.chunk_size)
        if out:
            certification_frame(extraction).to_csv(out, index=False, float_format="%.17g")
        summary = dict(extraction.counts, certified_fraction=extraction.certified_fraction)
        print_table(pd.DataFrame([summary]), "Certification summary")
    except (ValueError, OSError) as e:
        _fail(e)


@app.command("mc")
def cmd_mc(
    ctx: typer.Context,
    problem: Optional[str] = ProblemOpt,
    model: Optional[str] = ModelOpt,
    input: Optional[str] = InputOpt,
    safe: Optional[str] = SafeOpt,
    samples: Optional[int] = typer.Option(None, "--samples", help="Number of samples."),
    seed: Optional[int] = SeedOpt,
    out: Optional[str] = typer.Option(None, "--out", help="CSV of sampled images."),
    summary_out: Optional[str] = typer.Option(None, "--summary", help="JSON summary path (default: standard output)."),
):
    """Sample the network uniformly over the input box."""
    try:
        spec = _spec(ctx, problem, model=model, input=input, safe=safe, seed=seed)
        n = samples if samples is not None else ctx.obj.mc_samples
        result = monte_carlo(spec.load_model(), spec.input, n, spec.seed, safe=spec.safe)
        if out:
            mc_frame(result).to_csv(out, index=False, float_format="%.17g")
        summary = mc_summary(result, spec.seed)
        if summary_out:
            write_doc(summary_out, summary)
        else:
            typer.echo(json.dumps(summary, indent=2))
    except (ValueError, OSError) as e:
        _fail(e)


@app.command("plot")
def cmd_plot(
    ctx: typer.Context,
    out: str = typer.Option(..., "--out", help="SVG path."),
    full: Optional[str] = typer.Option(None, "--full", help="Cell CSV drawn in the full-set colour."),
    boundary: Optional[str] = typer.Option(None, "--boundary", help="Cell CSV drawn in the boundary colour."),
    mc: Optional[str] = typer.Option(None, "--mc", help="Sample CSV from `mc --out`."),
    safe: Optional[str] = SafeOpt,
    proj: Optional[Tuple[int, int]] = typer.Option(None, "--proj", help="Output dims to draw, e.g. --proj 0 2."),
):
    """Draw reach cells, samples and the safe box as a deterministic SVG."""
    try:
        plot_reach(
            out,
            full=read_cells_csv(full) if full else None,
            boundary=read_cells_csv(boundary) if boundary else None,
            mc_points=read_mc_csv(mc) if mc else None,
            safe=parse_box(safe) if safe else None,
            proj=proj,
            colors=ctx.obj.plot,
        )
    except (ValueError, OSError) as e:
        _fail(e)


@app.command("generate")
def cmd_generate(
    seed: int = typer.Option(0, "--seed"),
    dims: str = typer.Option(..., "--dims", help="Layer widths, e.g. 2,5,2."),
    activation: str = typer.Option("tanh", "--activation"),
    output_activation: str = typer.Option("linear", "--output-activation"),
    scale: float = typer.Option(1.0, "--scale"),
    structure: str = typer.Option("dense", "--structure", help="dense | coupled (invertible by construction)."),
    out: str = typer.Option(..., "--out", help="Model JSON path."),
):
    """Write a seeded network to a model JSON file."""
    try:
        widths = parse_grid(dims)
        if len(widths) < 2:
            raise ProblemSpecError(f"--dims needs at least two widths, got {dims}")
        net = generate_network(seed, widths, activation, scale, output_activation, structure)
        meta = {
            "seed": seed, "activation": activation, "output_activation": output_activation,
            "scale": scale, "structure": structure,
        }
        save_network(net, out, meta=meta)
        typer.echo(f"{net} written to {out}")
    except (ValueError, OSError) as e:
        _fail(e)


if __name__ == "__main__":
    app()
