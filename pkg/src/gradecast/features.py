"""Behavioural features computed per student per task.

Four families are supported:

* ``passing_rate``       fraction of testcases passed by the best submission
* ``testcase_outcomes``  0/1 vector of the best submission's testcase results
* ``submission_count``   number of submissions, late ones included
* ``sti``                hours between the earliest submission reaching the
                         pass-fraction threshold and the task deadline

A student who never submitted to a task contributes 0 / all-zeros for every
family, mirroring the 0-hour rule for late or absent qualifying submissions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dataset import Dataset, best_submission
from .errors import ConfigError

PASSING_RATE = "passing_rate"
TESTCASE_OUTCOMES = "testcase_outcomes"
SUBMISSION_COUNT = "submission_count"
STI = "sti"

FAMILIES = (PASSING_RATE, TESTCASE_OUTCOMES, SUBMISSION_COUNT, STI)

# Short aliases accepted on the command line.
FAMILY_ALIASES = {
    "pr": PASSING_RATE,
    "to": TESTCASE_OUTCOMES,
    "nos": SUBMISSION_COUNT,
    "sti": STI,
}


@dataclass(frozen=True)
class FeatureConfig:
    task_scope: tuple[str, ...]
    sti_threshold: float = 0.75

    def __post_init__(self):
        if not self.task_scope:
            raise ConfigError("task_scope must not be empty")
        if not 0.0 < self.sti_threshold <= 1.0:
            raise ConfigError("sti_threshold must be in (0, 1]")


@dataclass
class FeatureMatrix:
    """Dense per-student feature values plus an optional target column."""

    student_ids: list[str]
    column_names: list[str]
    values: np.ndarray
    target: np.ndarray | None = None
    target_name: str | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ConfigError("feature values must be a 2-D matrix")
        n, m = self.values.shape
        if n != len(self.student_ids) or m != len(self.column_names):
            raise ConfigError("feature matrix shape does not match its labels")
        if not np.all(np.isfinite(self.values)):
            raise ConfigError("feature matrix contains non-finite entries")
        if self.target is not None:
            self.target = np.asarray(self.target)
            if len(self.target) != n:
                raise ConfigError("target length does not match row count")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    def take(self, indices) -> "FeatureMatrix":
        """Row subset preserving order of ``indices``."""
        idx = list(indices)
        target = self.target[idx] if self.target is not None else None
        return FeatureMatrix(
            [self.student_ids[i] for i in idx],
            list(self.column_names),
            self.values[idx],
            target,
            self.target_name,
        )

    def with_target(self, target, target_name: str) -> "FeatureMatrix":
        return replace(self, target=np.asarray(target), target_name=target_name)

    def to_csv(self, path) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["student_id", *self.column_names]
            if self.target is not None:
                header.append("target")
            writer.writerow(header)
            for i, sid in enumerate(self.student_ids):
                row = [sid, *(repr(float(v)) for v in self.values[i])]
                if self.target is not None:
                    row.append(str(self.target[i]))
                writer.writerow(row)


def passing_rate(dataset: Dataset, student_id: str, task_id: str) -> float:
    task = dataset.task(task_id)
    best = best_submission(dataset, student_id, task_id)
    if best is None:
        return 0.0
    return best.passed_count / task.testcase_count


def testcase_outcomes(dataset: Dataset, student_id: str, task_id: str) -> np.ndarray:
    task = dataset.task(task_id)
    best = best_submission(dataset, student_id, task_id)
    vec = np.zeros(task.testcase_count)
    if best is not None:
        for i, outcome in enumerate(best.outcomes):
            if outcome.value == "P":
                vec[i] = 1.0
    return vec


def submission_count(dataset: Dataset, student_id: str, task_id: str) -> int:
    return len(dataset.submissions(student_id, task_id))


def submission_time_interval(
    dataset: Dataset, student_id: str, task_id: str, threshold: float = 0.75
) -> float:
    """Hours before the deadline of the earliest submission whose pass
    fraction reaches ``threshold``; 0 when no on-time submission does."""
    if not 0.0 < threshold <= 1.0:
        raise ConfigError("threshold must be in (0, 1]")
    task = dataset.task(task_id)
    qualifying = [
        sub.submitted_at
        for sub in dataset.submissions(student_id, task_id)
        if sub.submitted_at <= task.deadline
        and sub.passed_count / task.testcase_count >= threshold
    ]
    if not qualifying:
        return 0.0
    earliest = min(qualifying)
    return (task.deadline - earliest).total_seconds() / 3600.0


def build_feature_matrix(
    dataset: Dataset,
    family: str,
    config: FeatureConfig,
    target: str = "none",
) -> FeatureMatrix:
    """One row per retained student (sorted by id), columns per the family."""
    if family not in FAMILIES:
        raise ConfigError(f"unknown feature family {family!r}")
    if target not in ("midterm", "final", "none"):
        raise ConfigError(f"unknown target {target!r}")
    unknown = [t for t in config.task_scope if not dataset.has_task(t)]
    if unknown:
        raise ConfigError(f"task_scope references unknown tasks: {', '.join(unknown)}")

    students = list(dataset.student_ids)
    columns: list[str] = []
    rows = np.zeros((len(students), 0))

    blocks = []
    for task_id in config.task_scope:
        if family == TESTCASE_OUTCOMES:
            task = dataset.task(task_id)
            columns.extend(f"{task_id}:{tc}" for tc in task.testcase_ids)
            block = np.vstack(
                [testcase_outcomes(dataset, sid, task_id) for sid in students]
            )
        else:
            columns.append(task_id)
            if family == PASSING_RATE:
                col = [passing_rate(dataset, sid, task_id) for sid in students]
            elif family == SUBMISSION_COUNT:
                col = [float(submission_count(dataset, sid, task_id)) for sid in students]
            else:
                col = [
                    submission_time_interval(dataset, sid, task_id, config.sti_threshold)
                    for sid in students
                ]
            block = np.array(col).reshape(-1, 1)
        blocks.append(block)
    if blocks:
        rows = np.hstack(blocks)

    matrix = FeatureMatrix(students, columns, rows)
    if target != "none":
        grades = np.array([dataset.grade(sid, target) for sid in students])
        matrix = matrix.with_target(grades, target)
    return matrix
