"""Rumor-truth interaction dynamics on directed social networks.

Exact stochastic simulation of the four-state interaction chain, mean-field
integrators (linear / generic / simplified), spectral dying-out and
persistence criteria, and a reproducible sweep harness.
"""

from .errors import CapacityError, NumericalError, ParameterError, RumorTruthError
from .graph import (DirectedNetwork, ModelParams, generate_scale_free,
                    generate_small_world, is_strongly_connected, sample_params)
from .ctmc import (MarginalTrajectory, SamplePath, build_full_generator,
                   ensemble_average, gillespie_path, solve_exact,
                   transition_rates)
from .dynamics import (RateFamily, Trajectory, aggregate_fractions, eval_rates,
                       integrate_generic, integrate_linear, integrate_surqt,
                       jacobian_at_zero)
from .spectral import (EquilibriumResult, SpectralReport, build_q1, build_q2,
                       corollary_checks, find_rumor_equilibrium,
                       spectral_abscissa, spectral_radius, spectral_report,
                       theorem1_bounds)
from .harness import ExperimentConfig, classify_outcome, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
