from .CellGrid import CellGrid, boundary_faces, boundary_grids, partition
from .Certifier import (
    CertificationResult,
    SubsetExtraction,
    certify_grid,
    certify_homeomorphism,
    extract_subset,
    jacobian_bounds,
    jacobian_interval,
)
