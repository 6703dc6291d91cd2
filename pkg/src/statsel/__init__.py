"""Declarative statistical analysis: describe the data and the hypothesis,
get every valid test, run them, and read a corrected report."""

__version__ = "0.1.0"

from .dataset import Dataset, load_csv  # noqa: E402
from .engine import analyze, execute_test, run_tests  # noqa: E402
from .errors import DataError, SpecError, StatselError, StatsError  # noqa: E402
from .report import (  # noqa: E402
    AnalysisReport,
    holm_adjust,
    rank_by_power,
    render,
    report_from_json,
)
from .solver import build_knowledge_base, reconcile_assumptions, select_tests  # noqa: E402
from .speclang import load_spec, parse_spec, validate_spec  # noqa: E402

__all__ = [
    "AnalysisReport", "DataError", "Dataset", "SpecError", "StatsError", "StatselError",
    "__version__", "analyze", "build_knowledge_base", "execute_test", "holm_adjust",
    "load_csv", "load_spec", "parse_spec", "rank_by_power", "reconcile_assumptions", "render",
    "report_from_json", "run_tests", "select_tests", "validate_spec",
]
