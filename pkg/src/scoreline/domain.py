"""Shared value types for admission-score forecasting.

Everything here is an immutable value: equality is structural, construction
never mutates inputs, and validated values stay valid when re-checked.
Scores are integers on the cohort's grading scale (750 or 480); models may
carry one decimal internally but every stored prediction is an integer,
rounded half away from zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class ScorelineError(Exception):
    """Base class for every error this package raises on purpose."""


class ValidationError(ScorelineError):
    """A value violates one of its declared invariants."""


class DataFormatError(ScorelineError):
    """An on-disk file is malformed; carries the offending line when known."""

    def __init__(self, message, path=None, line=None):
        detail = message
        if path is not None:
            detail = f"{path}: {detail}"
        if line is not None:
            detail = f"{detail} (line {line})"
        super().__init__(detail)
        self.path = path
        self.line = line


class PredictionInputError(ScorelineError):
    """A predictor was invoked with inputs it cannot use."""


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero (never banker's)."""
    if x >= 0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


def normalize_university(name: str) -> str:
    """Canonical university id: trimmed and case-folded.

    The same id across years denotes the same university; joins between
    base and target years rely on this normalization.
    """
    return name.strip().casefold()


class ExamType(enum.Enum):
    LIKE = "LiKe"
    WENKE = "WenKe"

    @property
    def label(self) -> str:
        """Two-letter group prefix used in evaluation reports (LK / WK)."""
        return "LK" if self is ExamType.LIKE else "WK"

    @classmethod
    def parse(cls, text: str) -> "ExamType":
        folded = text.strip().casefold()
        if folded in ("like", "lk", "science"):
            return cls.LIKE
        if folded in ("wenke", "wk", "liberal-arts", "liberalarts"):
            return cls.WENKE
        raise ValidationError(f"unknown exam type {text!r} (expected LiKe or WenKe)")


class ModelId(enum.Enum):
    BRM = "brm"
    WSM = "wsm"
    WPM = "wpm"
    AASM = "aasm"
    AADM = "aadm"
    ENSEMBLE = "ensemble"

    @classmethod
    def parse(cls, text: str) -> "ModelId":
        folded = text.strip().casefold()
        for member in cls:
            if member.value == folded:
                return member
        raise ValidationError(f"unknown model id {text!r}")


VALID_TIERS = (1, 2, 3)
VALID_SCALES = (750, 480)


@dataclass(frozen=True)
class CohortKey:
    """The (year, region, exam, tier) coordinate that identifies one cohort."""

    year: int
    par: str
    exam_type: ExamType
    tier: int = 1

    def __str__(self) -> str:
        return f"{self.par}/{self.year}/{self.exam_type.value}/tier{self.tier}"

    def __lt__(self, other: "CohortKey") -> bool:
        mine = (self.year, self.par, self.exam_type.value, self.tier)
        theirs = (other.year, other.par, other.exam_type.value, other.tier)
        return mine < theirs


@dataclass(frozen=True)
class CohortContext:
    """One admission universe: a yearly (region, exam, tier) cohort.

    ``ascl`` is the admission score cutoff line for the tier, ``highest``
    the top realized score, ``admitted_total`` the number of admitted
    students, and ``scale_max`` the grading scale ceiling (750 or 480).
    """

    year: int
    par: str
    exam_type: ExamType
    tier: int
    ascl: int
    highest: int
    admitted_total: int
    scale_max: int = 750

    @property
    def key(self) -> CohortKey:
        return CohortKey(self.year, self.par, self.exam_type, self.tier)

    @property
    def group_label(self) -> str:
        """LK1 / WK1 / LK2 / WK2 style report label."""
        return f"{self.exam_type.label}{self.tier}"


def validate_context(ctx: CohortContext) -> CohortContext:
    """Check every CohortContext invariant; report the first violation by name."""
    if ctx.tier not in VALID_TIERS:
        raise ValidationError(f"tier out of range: {ctx.tier} (must be 1, 2 or 3)")
    if not isinstance(ctx.exam_type, ExamType):
        raise ValidationError(f"exam_type is not a valid exam type: {ctx.exam_type!r}")
    if ctx.scale_max not in VALID_SCALES:
        raise ValidationError(f"scale_max must be 750 or 480, got {ctx.scale_max}")
    if ctx.ascl < 0:
        raise ValidationError(f"ascl is negative: {ctx.ascl}")
    if ctx.ascl > ctx.highest:
        raise ValidationError(f"ascl > highest: {ctx.ascl} > {ctx.highest}")
    if ctx.highest > ctx.scale_max:
        raise ValidationError(f"highest > scale_max: {ctx.highest} > {ctx.scale_max}")
    if ctx.admitted_total < 1:
        raise ValidationError(f"admitted_total must be >= 1, got {ctx.admitted_total}")
    if not ctx.par or not ctx.par.strip():
        raise ValidationError("par must be a non-empty region identifier")
    return ctx


@dataclass(frozen=True)
class AdmissionRecord:
    """One admitted student: score plus the university and major that took them.

    Scores below the cohort ASCL are legal inputs (policy admits); they are
    exactly what outlier filtering exists to handle.
    """

    key: CohortKey
    university: str
    major: str
    score: int


def validate_record(record: AdmissionRecord, ctx: CohortContext) -> AdmissionRecord:
    if record.key != ctx.key:
        raise ValidationError(f"record context {record.key} does not match {ctx.key}")
    if record.score > ctx.highest:
        raise ValidationError(
            f"score {record.score} exceeds cohort highest {ctx.highest}"
        )
    if not record.university:
        raise ValidationError("university id must be non-empty")
    return record


@dataclass(frozen=True)
class UniversitySummary:
    """Per-university aggregate for one cohort.

    ``admission_score`` is the minimum retained admit score (the score
    line), ``highest_score`` the maximum. ``majors`` may be empty when the
    source data only carries the headline numbers.
    """

    key: CohortKey
    university: str
    admission_score: int
    highest_score: int
    enrollment: int
    location: str = ""
    majors: frozenset[str] = frozenset()
    ranking_group: int = 0
    admission_tier: int = 0

    def __post_init__(self):
        if self.admission_tier == 0:
            object.__setattr__(self, "admission_tier", self.key.tier)


def validate_summary(summary: UniversitySummary, ctx: CohortContext) -> UniversitySummary:
    if summary.key != ctx.key:
        raise ValidationError(f"summary context {summary.key} does not match {ctx.key}")
    if summary.admission_score > summary.highest_score:
        raise ValidationError(
            f"{summary.university}: admission_score {summary.admission_score} "
            f"> highest_score {summary.highest_score}"
        )
    if summary.highest_score > ctx.highest:
        raise ValidationError(
            f"{summary.university}: highest_score {summary.highest_score} "
            f"exceeds cohort highest {ctx.highest}"
        )
    if summary.enrollment < 1:
        raise ValidationError(f"{summary.university}: enrollment must be >= 1")
    return summary


@dataclass(frozen=True)
class Prediction:
    """A model's predicted admission score for one university.

    ``flags`` carries diagnostic markers such as ``clamped-to-ascl`` (base
    score fell below the base table), ``rank-beyond-table`` (carried rank
    ran past the target table) or ``clamped`` (final guard-range clamp).
    """

    university: str
    model: ModelId
    predicted_score: int
    base_years: tuple[int, ...]
    flags: frozenset[str] = frozenset()

    def with_flags(self, *extra: str) -> "Prediction":
        return replace(self, flags=self.flags | frozenset(extra))


def validate_prediction(pred: Prediction, ctx: CohortContext, guard: int = 10) -> Prediction:
    if not pred.base_years:
        raise ValidationError(f"{pred.university}: prediction has no base years")
    low, high = ctx.ascl - guard, ctx.highest
    if not low <= pred.predicted_score <= high:
        raise ValidationError(
            f"{pred.university}: predicted score {pred.predicted_score} outside "
            f"[{low}, {high}]"
        )
    return pred


@dataclass(frozen=True)
class StudentPreference:
    """The seven student-side parameters driving recommendations."""

    gaokao_score: int
    exam_type: ExamType
    tier: int
    preferred_locations: frozenset[str] = frozenset()
    disliked_locations: frozenset[str] = frozenset()
    preferred_majors: frozenset[str] = frozenset()
    disliked_majors: frozenset[str] = frozenset()


def validate_preference(prefs: StudentPreference, scale_max: int = 750) -> StudentPreference:
    if prefs.tier not in VALID_TIERS:
        raise ValidationError(f"tier out of range: {prefs.tier}")
    if not 0 <= prefs.gaokao_score <= scale_max:
        raise ValidationError(
            f"gaokao_score {prefs.gaokao_score} outside [0, {scale_max}]"
        )
    if prefs.preferred_locations & prefs.disliked_locations:
        clash = sorted(prefs.preferred_locations & prefs.disliked_locations)
        raise ValidationError(f"locations both preferred and disliked: {clash}")
    if prefs.preferred_majors & prefs.disliked_majors:
        clash = sorted(prefs.preferred_majors & prefs.disliked_majors)
        raise ValidationError(f"majors both preferred and disliked: {clash}")
    return prefs


@dataclass(frozen=True)
class RecommendationSlot:
    """One categorized score interval [low, high) with its member universities.

    ``label`` is A/B/C... with A the lowest interval (the reach pick) and
    the last letter the safest. ``universities`` holds
    (university id, predicted low, predicted high) triples.
    """

    category_index: int
    label: str
    low: int
    high: int
    universities: tuple[tuple[str, int, int], ...] = ()

    def contains(self, score: int) -> bool:
        return self.low <= score < self.high


def slot_label(index: int) -> str:
    """A, B, ..., Z, AA, AB, ... spreadsheet-style labels."""
    if index < 0:
        raise ValueError("slot index must be >= 0")
    label = ""
    index += 1
    while index:
        index, rem = divmod(index - 1, 26)
        label = chr(ord("A") + rem) + label
    return label
