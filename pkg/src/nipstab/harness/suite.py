"""Run a configured suite and write report.json, per-experiment CSVs and timing.json."""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .. import __version__
from .config import SCHEMA_VERSION, SuiteConfig, load_config
from .experiments import CSV_COLUMNS, ExperimentResult, Row, run_experiment


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def row_fields(exp_id: str, row: Row) -> list[str]:
    return [exp_id, row.check, str(row.instance), str(row.sample), fmt(row.x_norm),
            fmt(row.y_norm), fmt(float(row.defect_observed)), fmt(float(row.bound)),
            "pass" if row.passed else "fail"]


@dataclass
class SuiteReport:
    suite: SuiteConfig
    results: list[ExperimentResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        experiments = []
        for res in self.results:
            checks = res.checks()
            experiments.append({
                "experiment_id": res.config.experiment_id,
                "kind": res.config.kind,
                "seed": res.config.seed,
                "config": res.config.to_json(),
                "verdict": "pass" if res.passed else "fail",
                "rows": len(res.rows),
                "failures": sum(c["failures"] for c in checks.values()),
                "checks": checks,
                "csv": csv_name(res.config.experiment_id),
                "details": res.summary,
            })
        return {
            "schema_version": SCHEMA_VERSION,
            "library_version": __version__,
            "threads": self.suite.threads,
            "verdict": "pass" if self.passed else "fail",
            "experiments": experiments,
        }

    def timing(self) -> dict:
        return {"threads": self.suite.threads,
                "experiments": {r.config.experiment_id: r.runtime for r in self.results},
                "total": sum(r.runtime for r in self.results)}


def csv_name(exp_id: str) -> str:
    return f"{exp_id}.csv"


def execute(suite: SuiteConfig) -> SuiteReport:
    """Run every experiment; results keep config order whatever the thread count."""
    if suite.threads <= 1:
        results = [run_experiment(e) for e in suite.experiments]
    else:
        with ThreadPoolExecutor(max_workers=suite.threads) as pool:
            results = list(pool.map(run_experiment, suite.experiments))
    return SuiteReport(suite, results)


def write_report(report: SuiteReport, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for res in report.results:
        exp_id = res.config.experiment_id
        with open(os.path.join(out_dir, csv_name(exp_id)), "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            w.writerows(row_fields(exp_id, r) for r in res.rows)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "timing.json"), "w", encoding="utf-8") as fh:
        json.dump(report.timing(), fh, indent=2)
        fh.write("\n")


def run_suite(config, out_dir=None) -> SuiteReport:
    """Run a suite from a path or a parsed :class:`SuiteConfig`, optionally writing outputs."""
    suite = config if isinstance(config, SuiteConfig) else load_config(config)
    report = execute(suite)
    if out_dir is not None:
        write_report(report, out_dir)
    return report
