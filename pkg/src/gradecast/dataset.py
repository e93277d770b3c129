"""Course data model and CSV ingestion.

Input files (all CSV with a header row):

* tasks:        task_id,assignment_id,deadline,testcase_ids
                deadline is ISO-8601 UTC, testcase_ids is ``;``-separated
* submissions:  student_id,task_id,submitted_at,outcomes
                outcomes is a string over {P,F,C}, one character per testcase
* grades:       student_id,midterm,final (empty field = exam missed)

Students missing either exam are excluded from the dataset (their
submissions are dropped) and counted in the load report.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .errors import ConfigError, ParseError, ReferentialError


class Outcome(Enum):
    PASSED = "P"
    FAILED = "F"
    COMPILE_ERROR = "C"


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    assignment_id: str
    deadline: datetime
    testcase_ids: tuple[str, ...]

    @property
    def testcase_count(self) -> int:
        return len(self.testcase_ids)


@dataclass(frozen=True)
class CourseTimeline:
    midterm_date: datetime
    final_date: datetime
    midterm_max: float
    final_max: float

    def __post_init__(self):
        if self.midterm_date >= self.final_date:
            raise ConfigError("midterm_date must precede final_date")
        if self.midterm_max <= 0 or self.final_max <= 0:
            raise ConfigError("exam maxima must be positive")

    def exam_date(self, exam: str) -> datetime:
        return self.midterm_date if exam == "midterm" else self.final_date

    def exam_max(self, exam: str) -> float:
        return self.midterm_max if exam == "midterm" else self.final_max


@dataclass(frozen=True)
class SubmissionRecord:
    student_id: str
    task_id: str
    submitted_at: datetime
    outcomes: tuple[Outcome, ...]

    @property
    def passed_count(self) -> int:
        return sum(1 for o in self.outcomes if o is Outcome.PASSED)


@dataclass(frozen=True)
class GradeRecord:
    student_id: str
    midterm: float | None
    final: float | None

    def exam(self, which: str) -> float | None:
        return self.midterm if which == "midterm" else self.final


@dataclass
class LoadReport:
    """Counts of records read and dropped while building a dataset."""

    students_read: int = 0
    students_retained: int = 0
    excluded_students: list[str] = field(default_factory=list)
    submissions_read: int = 0
    submissions_dropped: int = 0


class Dataset:
    """Validated, immutable view of one course's submission history.

    Construction resolves referential integrity and drops students that
    miss either exam; afterwards the object is safe to share read-only.
    """

    def __init__(
        self,
        tasks: list[TaskSpec],
        timeline: CourseTimeline,
        submissions: list[SubmissionRecord],
        grades: list[GradeRecord],
    ):
        self._tasks_by_id: dict[str, TaskSpec] = {}
        for task in tasks:
            if task.testcase_count < 1:
                raise ConfigError(f"task {task.task_id} has no testcases")
            if task.task_id in self._tasks_by_id:
                raise ConfigError(f"duplicate task_id {task.task_id}")
            self._tasks_by_id[task.task_id] = task
        self.tasks = tuple(tasks)
        self.timeline = timeline

        self.report = LoadReport()
        self.report.students_read = len(grades)

        grades_by_id: dict[str, GradeRecord] = {}
        for g in grades:
            if g.student_id in grades_by_id:
                raise ConfigError(f"duplicate grade row for student {g.student_id}")
            grades_by_id[g.student_id] = g

        retained = {
            sid: g
            for sid, g in grades_by_id.items()
            if g.midterm is not None and g.final is not None
        }
        excluded = sorted(set(grades_by_id) - set(retained))
        self.report.excluded_students.extend(excluded)
        self.report.students_retained = len(retained)

        self.grades: dict[str, GradeRecord] = retained
        self.student_ids: tuple[str, ...] = tuple(sorted(retained))

        self._subs: dict[tuple[str, str], list[SubmissionRecord]] = {}
        seen: set[tuple[str, str, datetime]] = set()
        self.report.submissions_read = len(submissions)
        kept = 0
        for sub in submissions:
            task = self._tasks_by_id.get(sub.task_id)
            if task is None:
                raise ReferentialError(
                    f"submission references unknown task_id {sub.task_id!r}"
                )
            if sub.student_id not in grades_by_id:
                raise ReferentialError(
                    f"submission references unknown student_id {sub.student_id!r}"
                )
            if len(sub.outcomes) != task.testcase_count:
                raise ConfigError(
                    f"submission by {sub.student_id} to {sub.task_id} has "
                    f"{len(sub.outcomes)} outcomes, task has {task.testcase_count}"
                )
            key = (sub.student_id, sub.task_id, sub.submitted_at)
            if key in seen:
                raise ConfigError(
                    f"duplicate submission {sub.student_id}/{sub.task_id} at "
                    f"{sub.submitted_at.isoformat()}"
                )
            seen.add(key)
            if sub.student_id not in retained:
                continue
            self._subs.setdefault((sub.student_id, sub.task_id), []).append(sub)
            kept += 1
        self.report.submissions_dropped = self.report.submissions_read - kept

    def task(self, task_id: str) -> TaskSpec:
        try:
            return self._tasks_by_id[task_id]
        except KeyError:
            raise ReferentialError(f"unknown task_id {task_id!r}") from None

    def has_task(self, task_id: str) -> bool:
        return task_id in self._tasks_by_id

    def submissions(self, student_id: str, task_id: str) -> list[SubmissionRecord]:
        self.task(task_id)
        return list(self._subs.get((student_id, task_id), ()))

    def grade(self, student_id: str, exam: str) -> float:
        return self.grades[student_id].exam(exam)


def tasks_before(dataset: Dataset, cutoff: datetime) -> list[TaskSpec]:
    """Tasks whose deadline is on or before ``cutoff``, by deadline then id."""
    hits = [t for t in dataset.tasks if t.deadline <= cutoff]
    hits.sort(key=lambda t: (t.deadline, t.task_id))
    return hits


def best_submission(
    dataset: Dataset, student_id: str, task_id: str
) -> SubmissionRecord | None:
    """The submission passing the most testcases; ties go to the latest one."""
    subs = dataset.submissions(student_id, task_id)
    if not subs:
        return None
    return max(subs, key=lambda s: (s.passed_count, s.submitted_at))


def parse_timestamp(raw: str) -> datetime:
    text = raw.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _open_rows(path, required: list[str]):
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise ParseError(path, 1, f"missing columns: {', '.join(missing)}")
        for line_no, row in enumerate(reader, start=2):
            yield line_no, row


def _read_tasks(path) -> list[TaskSpec]:
    tasks = []
    for line_no, row in _open_rows(
        path, ["task_id", "assignment_id", "deadline", "testcase_ids"]
    ):
        try:
            deadline = parse_timestamp(row["deadline"])
        except ValueError:
            raise ParseError(path, line_no, f"bad timestamp {row['deadline']!r}") from None
        ids = tuple(t for t in row["testcase_ids"].split(";") if t)
        if not ids:
            raise ParseError(path, line_no, "task has no testcase_ids")
        if len(set(ids)) != len(ids):
            raise ParseError(path, line_no, "duplicate testcase ids")
        tasks.append(TaskSpec(row["task_id"], row["assignment_id"], deadline, ids))
    return tasks


def _parse_outcomes(raw: str, path, line_no: int) -> tuple[Outcome, ...]:
    outcomes = []
    for ch in raw.strip():
        try:
            outcomes.append(Outcome(ch))
        except ValueError:
            raise ParseError(path, line_no, f"bad outcome character {ch!r}") from None
    if any(o is Outcome.COMPILE_ERROR for o in outcomes) and not all(
        o is Outcome.COMPILE_ERROR for o in outcomes
    ):
        raise ParseError(
            path, line_no, "compile_error must apply to every testcase of a submission"
        )
    return tuple(outcomes)


def _read_submissions(path, tasks_by_id: dict[str, TaskSpec]) -> list[SubmissionRecord]:
    subs = []
    seen: set[tuple[str, str, datetime]] = set()
    for line_no, row in _open_rows(
        path, ["student_id", "task_id", "submitted_at", "outcomes"]
    ):
        task = tasks_by_id.get(row["task_id"])
        if task is None:
            raise ReferentialError(
                f"{path}:{line_no}: unknown task_id {row['task_id']!r}"
            )
        try:
            ts = parse_timestamp(row["submitted_at"])
        except ValueError:
            raise ParseError(
                path, line_no, f"bad timestamp {row['submitted_at']!r}"
            ) from None
        outcomes = _parse_outcomes(row["outcomes"], path, line_no)
        if len(outcomes) != task.testcase_count:
            raise ParseError(
                path,
                line_no,
                f"{len(outcomes)} outcomes for task {task.task_id} "
                f"with {task.testcase_count} testcases",
            )
        key = (row["student_id"], row["task_id"], ts)
        if key in seen:
            raise ParseError(path, line_no, "duplicate (student, task, timestamp) row")
        seen.add(key)
        subs.append(SubmissionRecord(row["student_id"], row["task_id"], ts, outcomes))
    return subs


def _parse_grade(raw: str, maximum: float, path, line_no: int, label: str) -> float | None:
    text = raw.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(path, line_no, f"bad {label} grade {raw!r}") from None
    if value < 0 or value > maximum:
        raise ParseError(
            path, line_no, f"{label} grade {value} outside [0, {maximum}]"
        )
    return value


def _read_grades(path, timeline: CourseTimeline) -> list[GradeRecord]:
    grades = []
    seen: set[str] = set()
    for line_no, row in _open_rows(path, ["student_id", "midterm", "final"]):
        sid = row["student_id"]
        if sid in seen:
            raise ParseError(path, line_no, f"duplicate grade row for {sid}")
        seen.add(sid)
        grades.append(
            GradeRecord(
                sid,
                _parse_grade(row["midterm"], timeline.midterm_max, path, line_no, "midterm"),
                _parse_grade(row["final"], timeline.final_max, path, line_no, "final"),
            )
        )
    return grades


def load_dataset(tasks_path, submissions_path, grades_path, timeline: CourseTimeline) -> Dataset:
    """Load and cross-validate the three CSV files into a Dataset."""
    tasks = _read_tasks(tasks_path)
    tasks_by_id = {t.task_id: t for t in tasks}
    if len(tasks_by_id) != len(tasks):
        raise ConfigError("duplicate task ids in tasks file")
    grades = _read_grades(grades_path, timeline)
    submissions = _read_submissions(submissions_path, tasks_by_id)
    return Dataset(tasks, timeline, submissions, grades)


def timeline_from_file(path) -> CourseTimeline:
    """Parse a key=value config file holding the four timeline fields."""
    values: dict[str, str] = {}
    path = Path(path)
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(path, line_no, "expected key=value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    required = ["midterm_date", "final_date", "midterm_max", "final_max"]
    missing = [k for k in required if k not in values]
    if missing:
        raise ConfigError(f"timeline file missing keys: {', '.join(missing)}")
    return CourseTimeline(
        midterm_date=parse_timestamp(values["midterm_date"]),
        final_date=parse_timestamp(values["final_date"]),
        midterm_max=float(values["midterm_max"]),
        final_max=float(values["final_max"]),
    )
