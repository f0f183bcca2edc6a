"""1D logarithmic Schrodinger simulation and regularity diagnostics."""

from .grid import BoundaryCondition, Field, Grid, make_grid, odd_defect, sample

__version__ = "0.1.0"

__all__ = ["BoundaryCondition", "Field", "Grid", "make_grid", "odd_defect", "sample", "__version__"]
