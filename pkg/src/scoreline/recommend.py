"""Interval-bucketed application recommendations.

For each candidate university the engine predicts the score line (the
minimum admit score) and the highest admit score, pads both ends by a
small margin, and slices the padded range into J contiguous half-open
intervals labeled A upward. A student whose score lands in a university's
A interval is reaching; the last letter is the safe pick. One university,
one slot, or none at all when the student's score misses the padded range.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .domain import (
    ModelId,
    Prediction,
    RecommendationSlot,
    ScorelineError,
    StudentPreference,
    UniversitySummary,
    round_half_away,
    slot_label,
    validate_preference,
)
from .models import (
    BaseYear,
    PredictionInput,
    clamp_prediction,
    ensemble_mean,
    predict_aadm,
    predict_aasm,
    predict_brm,
    predict_wpm,
    sort_for_wsm,
    wsm_plan,
)

DEFAULT_PAD = 5


class RecommendError(ScorelineError):
    pass


@dataclass(frozen=True)
class UniversityIntervalSet:
    """One university's padded score range sliced into J labeled slots."""

    university: str
    predicted_low: int
    predicted_high: int
    pad: int
    slot_count: int
    slots: tuple[RecommendationSlot, ...]
    flags: frozenset[str] = frozenset()

    def slot_by_label(self, label: str) -> RecommendationSlot | None:
        for slot in self.slots:
            if slot.label == label:
                return slot
        return None


def build_slots(
    a_low: int,
    a_high: int,
    slot_count: int,
    pad: int = DEFAULT_PAD,
    university: str = "",
) -> UniversityIntervalSet:
    """Slice [a_low - pad, a_high + pad) into slot_count contiguous intervals.

    Interior boundaries step by (a_high - a_low) / slot_count from a_low;
    when that gap is too small to give every slot room (degenerate
    predictions), the padded range is sliced evenly instead.
    """
    if a_low > a_high:
        raise RecommendError(f"predicted low {a_low} exceeds predicted high {a_high}")
    if slot_count < 1:
        raise RecommendError("slot count must be >= 1")
    if pad < 1:
        raise RecommendError("pad must be >= 1")

    start = a_low - pad
    end = a_high + pad
    spread = a_high - a_low
    if spread >= slot_count:
        boundaries = [
            a_low + round_half_away(j * spread / slot_count)
            for j in range(1, slot_count)
        ]
    else:
        if end - start < slot_count:
            raise RecommendError(
                f"padded range [{start}, {end}) too narrow for {slot_count} slots"
            )
        boundaries = [
            start + round_half_away(j * (end - start) / slot_count)
            for j in range(1, slot_count)
        ]

    edges = [start, *boundaries, end]
    triple = ((university, a_low, a_high),) if university else ()
    slots = tuple(
        RecommendationSlot(
            category_index=j,
            label=slot_label(j),
            low=edges[j],
            high=edges[j + 1],
            universities=triple,
        )
        for j in range(slot_count)
    )
    return UniversityIntervalSet(
        university=university,
        predicted_low=a_low,
        predicted_high=a_high,
        pad=pad,
        slot_count=slot_count,
        slots=slots,
    )


def assign_slot(score: int, interval_set: UniversityIntervalSet) -> str | None:
    """Label of the unique slot containing the score, or None outside all."""
    for slot in interval_set.slots:
        if slot.contains(score):
            return slot.label
    return None


def filter_candidates(
    prefs: StudentPreference,
    profiles,
) -> list[UniversitySummary]:
    """Apply the hard constraints and order survivors for display.

    Exam type and admission tier must match; a disliked location excludes,
    as does a university whose every known major is disliked. Preferred
    locations and majors never exclude - they only float matches to the
    front. Survivors sort preferred-first, then by score line descending.
    """
    validate_preference(prefs)
    kept = []
    for profile in profiles:
        if profile.key.exam_type is not prefs.exam_type:
            continue
        if profile.admission_tier != prefs.tier:
            continue
        if profile.location and profile.location in prefs.disliked_locations:
            continue
        if profile.majors and profile.majors <= prefs.disliked_majors:
            continue
        preferred = bool(
            (profile.location and profile.location in prefs.preferred_locations)
            or (profile.majors & prefs.preferred_majors)
        )
        kept.append((preferred, profile))
    kept.sort(key=lambda pair: (not pair[0], -pair[1].admission_score, pair[1].university))
    return [profile for _, profile in kept]


def _predict_pair(
    summary: UniversitySummary,
    base: BaseYear,
    inputs: PredictionInput,
    model: ModelId,
    wsm_position: int | None = None,
    plan=None,
) -> tuple[Prediction, Prediction]:
    """Predict (score line, highest score) for one university from one base year.

    The highest admit score rides through the same predictor with the base
    year's highest score standing in for the admission score.
    """
    if model is ModelId.WSM:
        low = predict_brm(summary.admission_score, base.srt, inputs.srt_target, summary.university)
        high = predict_brm(summary.highest_score, base.srt, inputs.srt_target, summary.university)
        bias = plan.sign * plan.bias_at(wsm_position)
        low = Prediction(summary.university, ModelId.WSM, low.predicted_score + bias,
                         low.base_years, low.flags)
        high = Prediction(summary.university, ModelId.WSM, high.predicted_score + bias,
                          high.base_years, high.flags)
    elif model is ModelId.WPM:
        low = predict_wpm(summary, base.srt, inputs.srt_target)
        high_summary = UniversitySummary(
            key=summary.key,
            university=summary.university,
            admission_score=summary.highest_score,
            highest_score=summary.highest_score,
            enrollment=summary.enrollment,
            location=summary.location,
            majors=summary.majors,
        )
        high = predict_wpm(high_summary, base.srt, inputs.srt_target)
    elif model is ModelId.BRM:
        low = predict_brm(summary.admission_score, base.srt, inputs.srt_target, summary.university)
        high = predict_brm(summary.highest_score, base.srt, inputs.srt_target, summary.university)
    else:
        raise RecommendError(f"{model.value} cannot drive recommendations directly")
    return low, high


@dataclass(frozen=True)
class RecommendationResult:
    """J labeled slots, each holding the universities whose slot matched."""

    slot_count: int
    labels: tuple[str, ...]
    slots: dict[str, tuple[UniversityIntervalSet, ...]]
    diagnostics: tuple[str, ...] = ()

    def placed(self, label: str) -> tuple[UniversityIntervalSet, ...]:
        return self.slots.get(label, ())


def recommend(
    prefs: StudentPreference,
    inputs: PredictionInput,
    profiles,
    model: ModelId = ModelId.BRM,
    slot_count: int = 3,
    pad: int = DEFAULT_PAD,
) -> RecommendationResult:
    """Place each eligible university's interval set around the student.

    Candidates pass the preference filter, get a predicted (score line,
    highest score) interval per base year (averaged when two are given),
    then the student's score picks at most one slot per university.
    """
    candidates = filter_candidates(prefs, profiles)
    diagnostics: list[str] = []
    labels = tuple(slot_label(j) for j in range(slot_count))
    buckets: dict[str, list[UniversityIntervalSet]] = {label: [] for label in labels}

    if model in (ModelId.AASM, ModelId.AADM):
        _recommend_two_base(prefs, inputs, candidates, model, slot_count, pad,
                            buckets, diagnostics)
    else:
        _recommend_rank_models(prefs, inputs, candidates, model, slot_count, pad,
                               buckets, diagnostics)

    return RecommendationResult(
        slot_count=slot_count,
        labels=labels,
        slots={label: tuple(items) for label, items in buckets.items()},
        diagnostics=tuple(diagnostics),
    )


def _place(prefs, interval_set, buckets, diagnostics):
    label = assign_slot(prefs.gaokao_score, interval_set)
    if label is not None and label in buckets:
        buckets[label].append(interval_set)


def _interval_from_predictions(university, low_pred, high_pred, target, guard,
                               slot_count, pad, diagnostics):
    low_pred = clamp_prediction(low_pred, target, guard)
    high_pred = clamp_prediction(high_pred, target, guard)
    low, high = low_pred.predicted_score, high_pred.predicted_score
    flags = set(low_pred.flags | high_pred.flags)
    if high < low:
        low, high = high, low
        flags.add("swapped")
        diagnostics.append(f"{university}: predicted interval inverted, swapped")
    # routine provenance flags stay on the cards; only anomalies make notes
    for flag in sorted(flags & {"clamped", "clamped-to-ascl", "rank-beyond-table"}):
        diagnostics.append(f"{university}: {flag}")
    interval_set = build_slots(low, high, slot_count, pad, university)
    return replace(interval_set, flags=frozenset(flags))


def _recommend_rank_models(prefs, inputs, candidates, model, slot_count, pad,
                           buckets, diagnostics):
    target, guard = inputs.target, inputs.guard
    per_university: dict[str, list[tuple[Prediction, Prediction]]] = {}
    candidate_ids = {c.university for c in candidates}

    for base in inputs.ordered_bases():
        plan = None
        positions: dict[str, int] = {}
        if model is ModelId.WSM:
            ordered = sort_for_wsm(base.summaries)
            plan = wsm_plan(len(ordered), target.ascl, base.context.ascl)
            positions = {s.university: i for i, s in enumerate(ordered, start=1)}
        for summary in base.summaries:
            if summary.university not in candidate_ids:
                continue
            pair = _predict_pair(
                summary, base, inputs, model,
                wsm_position=positions.get(summary.university),
                plan=plan,
            )
            per_university.setdefault(summary.university, []).append(pair)

    order = [c.university for c in candidates]
    for university in order:
        pairs = per_university.get(university)
        if not pairs:
            diagnostics.append(f"{university}: no base-year data, skipped")
            continue
        low_pred = ensemble_mean([p[0] for p in pairs])
        high_pred = ensemble_mean([p[1] for p in pairs])
        if len(pairs) < len(inputs.bases):
            diagnostics.append(f"{university}: single-base")
        interval_set = _interval_from_predictions(
            university, low_pred, high_pred, target, guard, slot_count, pad, diagnostics
        )
        _place(prefs, interval_set, buckets, diagnostics)


def _recommend_two_base(prefs, inputs, candidates, model, slot_count, pad,
                        buckets, diagnostics):
    bases = inputs.ordered_bases()
    if len(bases) < 2:
        raise RecommendError(f"{model.value} needs two base years")
    target, guard = inputs.target, inputs.guard
    prev1, prev2 = bases[0], bases[1]
    map1, map2 = prev1.by_university(), prev2.by_university()
    years = (prev1.context.year, prev2.context.year)

    for candidate in candidates:
        university = candidate.university
        s1, s2 = map1.get(university), map2.get(university)
        if s1 is None or s2 is None:
            diagnostics.append(f"{university}: missing a base year, skipped")
            continue
        if model is ModelId.AASM:
            low_pred = predict_aasm(s1.admission_score, s2.admission_score, university, years)
            high_pred = predict_aasm(s1.highest_score, s2.highest_score, university, years)
        else:
            low_pred = predict_aadm(
                s1.admission_score, s2.admission_score, target.ascl,
                prev1.context.ascl, prev2.context.ascl, university, years,
            )
            high_pred = predict_aadm(
                s1.highest_score, s2.highest_score, target.ascl,
                prev1.context.ascl, prev2.context.ascl, university, years,
            )
        interval_set = _interval_from_predictions(
            university, low_pred, high_pred, target, guard, slot_count, pad, diagnostics
        )
        _place(prefs, interval_set, buckets, diagnostics)


def intervals_of(result: RecommendationResult) -> dict[str, UniversityIntervalSet]:
    """Flatten a result into university -> interval set (each appears once)."""
    out: dict[str, UniversityIntervalSet] = {}
    for label in result.labels:
        for interval_set in result.placed(label):
            out[interval_set.university] = interval_set
    return out
