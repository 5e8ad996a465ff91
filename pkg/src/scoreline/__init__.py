"""Rank-based forecasting of university admission score lines.

The package turns prior-year admission data into next-year score-line
predictions and student-facing application recommendations:

* :mod:`scoreline.srt`        - score-ranking tables (build, query, densify, project)
* :mod:`scoreline.outliers`   - MAD filtering of policy admits and anomalies
* :mod:`scoreline.models`     - the predictor suite and two-base-year ensemble
* :mod:`scoreline.recommend`  - interval-bucketed A/B/C recommendations
* :mod:`scoreline.evaluate`   - point-difference accuracy reports
* :mod:`scoreline.ingest`     - CSV parsing, validation, aggregation
* :mod:`scoreline.cli` / :mod:`scoreline.service` - command line and HTTP front ends
"""

from .domain import (
    AdmissionRecord,
    CohortContext,
    CohortKey,
    ExamType,
    ModelId,
    Prediction,
    RecommendationSlot,
    ScorelineError,
    StudentPreference,
    UniversitySummary,
    ValidationError,
    round_half_away,
    validate_context,
)
from .ingest import DatasetSnapshot, load_snapshot, summarize
from .models import (
    BaseYear,
    PredictionInput,
    WsmPlan,
    ensemble_mean,
    predict_aadm,
    predict_aasm,
    predict_brm,
    predict_wpm,
    predict_wsm,
    run_model,
    wsm_plan,
)
from .outliers import (
    FilterReport,
    MadConfig,
    double_mad_filter,
    filter_scores,
    single_mad_filter,
)
from .recommend import (
    RecommendationResult,
    UniversityIntervalSet,
    assign_slot,
    build_slots,
    filter_candidates,
    recommend,
)
from .evaluate import AccuracyCell, AccuracyReport, accuracy_report, pd_accuracy
from .srt import (
    AmendedTable,
    FittedCurve,
    ProjectionConfig,
    ScoreRankingTable,
    amend_table,
    build_srt,
    count_at,
    interpolate_sparse,
    project_srt,
    rank_of,
    score_of,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
