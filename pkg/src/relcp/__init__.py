"""Relevant mean change tests for high dimensional time series."""

from .asymptotic import (
    TestReport,
    asymptotic_test,
    gumbel_quantile,
    max_statistic,
    panel_statistics,
    scaling_sequences,
)
from .bootstrap import BootstrapConfig, BootstrapReport, bootstrap_test
from .changepoint import estimate_changepoint, estimate_jump
from .config import EstimationConfig
from .cusum import cusum_path, integral_cusum_kernel, tau, tau_tilde
from .datagen import SimScenario, gen_innovations, inject_shifts, simulate_panel
from .errors import (
    ConfigurationError,
    DegenerateMultiplierError,
    DegenerateSplitError,
    InvalidInputError,
    RelcpError,
)
from .harness import ExperimentResult, Method, power_curve, rejection_rate
from .io import DetectRequest, emit_plot_data, load_panel_csv, run_detect
from .variance import sigma_hat

__version__ = "0.1.0"

__all__ = [
    "TestReport",
    "asymptotic_test",
    "gumbel_quantile",
    "max_statistic",
    "panel_statistics",
    "scaling_sequences",
    "BootstrapConfig",
    "BootstrapReport",
    "bootstrap_test",
    "estimate_changepoint",
    "estimate_jump",
    "EstimationConfig",
    "cusum_path",
    "integral_cusum_kernel",
    "tau",
    "tau_tilde",
    "SimScenario",
    "gen_innovations",
    "inject_shifts",
    "simulate_panel",
    "ConfigurationError",
    "DegenerateMultiplierError",
    "DegenerateSplitError",
    "InvalidInputError",
    "RelcpError",
    "ExperimentResult",
    "Method",
    "power_curve",
    "rejection_rate",
    "DetectRequest",
    "emit_plot_data",
    "load_panel_csv",
    "run_detect",
    "sigma_hat",
]
