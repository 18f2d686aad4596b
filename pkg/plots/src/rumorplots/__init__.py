"""Figure scripts for rumor-truth simulation outputs.

Consumes only the documented CSV schemas (aggregate trajectories and sweep
summaries); no dependency on the simulation package itself.
"""

from .figures import FigureSpec, plot_sweep_scatter, plot_trajectory_compare
from .schemas import SchemaError, read_aggregate, read_summary

__all__ = ["FigureSpec", "SchemaError", "plot_sweep_scatter",
           "plot_trajectory_compare", "read_aggregate", "read_summary"]
__version__ = "0.1.0"
