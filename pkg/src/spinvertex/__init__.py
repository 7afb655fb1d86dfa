"""Integrable spin models, their vertex-model R-matrices and quantum chains.

The package builds edge weights for the Potts, Ashkin-Teller,
Fateev-Zamolodchikov and Kashiwara-Miwa families, converts them into Lax
operators and R-matrices, and checks the Yang-Baxter machinery numerically.
"""
from .errors import BudgetError, ConfigError, PoleError
from .models import SpinModel, make_model
from .vertex import lax, permutator, r_matrix, transfer_dia, transfer_row
from .checks import CheckResult
from .report import SuiteConfig, emit_report, run_suite

__version__ = "0.1.0"

__all__ = [
    "BudgetError", "ConfigError", "PoleError", "SpinModel", "make_model",
    "lax", "permutator", "r_matrix", "transfer_dia", "transfer_row",
    "CheckResult", "SuiteConfig", "run_suite", "emit_report",
]
