from .PlotSvg import plot_reach
from .ProblemSpec import ProblemSpec, build_spec, parse_box, parse_grid, read_problem_file
from .Reports import (
    EXIT_CODES,
    EXIT_ERROR,
    VERDICT_SCHEMA,
    certification_frame,
    cells_frame,
    compare_frame,
    exit_code,
    mc_frame,
    mc_summary,
    print_table,
    read_cells_csv,
    read_mc_csv,
    read_verdict,
    verdict_document,
    write_cells_csv,
    write_verdict,
)
