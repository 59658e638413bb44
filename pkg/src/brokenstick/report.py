"""Machine-readable result records and report serialization.

Every run emits a sequence of ResultRecords; a record is gated either by a
z-score (Monte Carlo vs reference, |z| <= 4) or by an absolute tolerance
(deterministic evaluations).  Reports embed the seed, sample count, worker
count, and artifact version, and serialize deterministically so identical
configurations produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1
ARTIFACT_VERSION = "0.1.0"
Z_GATE = 4.0

CSV_COLUMNS = (
    "quantity",
    "method",
    "value",
    "std_error",
    "ci95_low",
    "ci95_high",
    "n_samples",
    "reference_value",
    "z_score",
    "tolerance",
    "pass",
    "note",
    "criterion",
)


@dataclass(frozen=True)
class RunConfig:
    """Fully determines a run; equal configs give byte-identical reports."""

    command: str                      # exact | estimate | verify | witness
    quantity: str | None
    params: dict
    samples: int
    seed: int
    workers: int
    format: str = "json"              # json | csv
    out: str | None = None            # path, or None for stdout


@dataclass(frozen=True)
class ResultRecord:
    quantity: str
    method: str                       # closed-form | monte-carlo | quadrature | bound
    value: float
    passed: bool
    std_error: float | None = None
    ci95_low: float | None = None
    ci95_high: float | None = None
    n_samples: int | None = None
    reference_value: float | None = None
    z_score: float | None = None
    tolerance: float | None = None
    note: str | None = None
    criterion: int | None = None

    def as_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "method": self.method,
            "value": self.value,
            "std_error": self.std_error,
            "ci95_low": self.ci95_low,
            "ci95_high": self.ci95_high,
            "n_samples": self.n_samples,
            "reference_value": self.reference_value,
            "z_score": self.z_score,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "note": self.note,
            "criterion": self.criterion,
        }


def mc_record(
    quantity: str,
    estimate,
    reference: float | None,
    note: str | None = None,
    criterion: int | None = None,
) -> ResultRecord:
    """Monte Carlo row: gated at |z| <= 4 when a reference value exists.

    A zero standard error (degenerate estimator) falls back to near-exact
    comparison.
    """
    z = None
    passed = True
    if reference is not None:
        if estimate.std_error > 0.0:
            z = (estimate.mean - reference) / estimate.std_error
            passed = abs(z) <= Z_GATE
        else:
            passed = abs(estimate.mean - reference) <= 1e-12
    return ResultRecord(
        quantity=quantity,
        method="monte-carlo",
        value=estimate.mean,
        std_error=estimate.std_error,
        ci95_low=estimate.ci95_low,
        ci95_high=estimate.ci95_high,
        n_samples=estimate.n_samples,
        reference_value=reference,
        z_score=z,
        passed=passed,
        note=note,
        criterion=criterion,
    )


def deterministic_record(
    quantity: str,
    value: float,
    reference: float,
    tolerance: float,
    method: str = "closed-form",
    note: str | None = None,
    criterion: int | None = None,
) -> ResultRecord:
    """Deterministic row: gated at |value - reference| <= tolerance."""
    return ResultRecord(
        quantity=quantity,
        method=method,
        value=value,
        reference_value=reference,
        tolerance=tolerance,
        passed=abs(value - reference) <= tolerance,
        note=note,
        criterion=criterion,
    )


def value_record(
    quantity: str,
    value: float,
    method: str = "closed-form",
    reference: float | None = None,
    note: str | None = None,
    criterion: int | None = None,
) -> ResultRecord:
    """Ungated informational row (always passes)."""
    return ResultRecord(
        quantity=quantity,
        method=method,
        value=value,
        reference_value=reference,
        passed=True,
        note=note,
        criterion=criterion,
    )


def report_dict(config: RunConfig, records) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact": "brokenstick",
        "artifact_version": ARTIFACT_VERSION,
        "command": config.command,
        "quantity": config.quantity,
        "params": {k: config.params[k] for k in sorted(config.params)},
        "seed": config.seed,
        "samples": config.samples,
        "workers": config.workers,
        "records": [r.as_dict() for r in records],
    }


def to_json(config: RunConfig, records) -> str:
    return json.dumps(report_dict(config, records), indent=2, sort_keys=True) + "\n"


def to_csv(config: RunConfig, records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        d = r.as_dict()
        writer.writerow(["" if d[c] is None else repr(d[c]) if isinstance(d[c], float) else d[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def all_passed(records) -> bool:
    return all(r.passed for r in records)
