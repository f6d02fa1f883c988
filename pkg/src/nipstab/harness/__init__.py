"""Batch experiments: config parsing, instance generation, suite execution."""

from .config import (ExperimentConfig, SuiteConfig, default_suite_text, load_config,
                     parse_config)
from .experiments import CSV_COLUMNS, ExperimentResult, Row, generate_instance, run_experiment
from .suite import SuiteReport, run_suite, write_report

__all__ = [
    "CSV_COLUMNS", "ExperimentConfig", "ExperimentResult", "Row", "SuiteConfig", "SuiteReport",
    "default_suite_text", "generate_instance", "load_config", "parse_config", "run_experiment",
    "run_suite", "write_report",
]
