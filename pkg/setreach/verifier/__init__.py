from .MonteCarlo import MonteCarloResult, monte_carlo, sample_box
from .Verifier import (
    CellReach,
    Mode,
    Status,
    Verdict,
    VerificationProblem,
    VerificationStats,
    check_inclusion,
    compare_modes,
    time_reduction,
    verify,
    verify_auto,
    verify_boundary,
    verify_full,
    verify_subset,
)
