"""Predict student exam performance from auto-grading submission logs.

The toolkit ingests per-submission testcase outcomes, derives behavioural
features (passing rate, testcase outcomes, submission counts, submission
time intervals), fits decision-tree and linear-regression models, and
evaluates them with confusion matrices, per-class metrics and
per-assignment correlation tables.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    GradecastError,
    ParseError,
    PredictionError,
    RebalanceError,
    ReferentialError,
    SingularityError,
    TrainingError,
)

__all__ = [
    "ConfigError",
    "GradecastError",
    "ParseError",
    "PredictionError",
    "RebalanceError",
    "ReferentialError",
    "SingularityError",
    "TrainingError",
    "__version__",
]
