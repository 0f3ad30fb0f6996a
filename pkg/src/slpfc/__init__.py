"""Conservative, positivity-preserving semi-Lagrangian advection."""

from .core import (CellAverages, Displacement, QuadraticRecon, QuarticRecon,
                   UniformGrid1D, eval_quadratic, eval_quartic, median3)
from .engine import (FluxRecord, SchemeSelector, advect_step, error_norms,
                     linear5_reconstruct, outgoing_flux, sweep_lines)

__version__ = "0.1.0"

__all__ = [
    "CellAverages", "Displacement", "QuadraticRecon", "QuarticRecon",
    "UniformGrid1D", "eval_quadratic", "eval_quartic", "median3",
    "FluxRecord", "SchemeSelector", "advect_step", "error_norms",
    "linear5_reconstruct", "outgoing_flux", "sweep_lines",
    "__version__",
]
