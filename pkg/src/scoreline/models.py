"""The predictor suite: rank-carrying models and score-average baselines.

The rank-carrying family rests on one observation: a university admits
students of roughly the same *rank* in its region year over year, even
while scores and cutoff lines drift. The baseline model carries last
year's admission-score rank into this year's table. Two refinements add
a small integer bias when the cutoff line moves:

* the weight-slicing model spreads the cutoff move across rank-ordered
  slices of the university list (low-ranked universities absorb more of
  the move), and
* the weighted-point model sizes the bias by how crowded the university's
  admission score was relative to the average students-per-point.

The score-average baselines (mean admission score, mean cutoff-distance)
are the folk methods the rank models are measured against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import (
    CohortContext,
    ModelId,
    Prediction,
    PredictionInputError,
    UniversitySummary,
    round_half_away,
)
from .srt import (
    EXACT,
    INTERPOLATED,
    ScoreRankingTable,
    count_at,
    lookup,
    rank_of,
)

FLAG_CLAMPED_TO_ASCL = "clamped-to-ascl"
FLAG_CLAMPED = "clamped"
FLAG_SINGLE_BASE = "single-base"
FLAG_TWO_BASE_MEAN = "two-base-mean"


def predict_brm(
    a_base: int,
    srt_base: ScoreRankingTable,
    srt_target: ScoreRankingTable,
    university: str = "",
) -> Prediction:
    """Carry last year's admission-score rank into the target table.

    A base score below the base table clamps to the cutoff line (policy
    admits may sit below it); a carried rank past the target table's
    bottom answers the lowest target score. Both cases are flagged.
    """
    flags = set()
    effective = int(a_base)
    if effective < srt_base.low:
        effective = srt_base.context.ascl
        flags.add(FLAG_CLAMPED_TO_ASCL)
    rank = rank_of(srt_base, effective)
    predicted, lookup_flags = lookup(srt_target, rank=rank)
    flags |= lookup_flags
    return Prediction(
        university=university,
        model=ModelId.BRM,
        predicted_score=int(predicted),
        base_years=(srt_base.context.year,),
        flags=frozenset(flags),
    )


@dataclass(frozen=True)
class WsmPlan:
    """How a cutoff-line move is sliced across the rank-ordered university list.

    ``weight`` is the absolute cutoff move; ``interval_count`` the smallest
    d whose triangular number reaches it. ``bounds`` are inclusive 1-based
    (start, end) rank-position intervals covering [1, n] exactly; the
    university in interval j receives bias j (signed by ``sign``).
    """

    weight: int
    interval_count: int
    sizes: tuple[int, ...]
    bounds: tuple[tuple[int, int], ...]
    sign: int

    def bias_at(self, position: int) -> int:
        """Bias index for a 1-based rank position; 0 under the empty plan."""
        if self.interval_count == 0:
            return 0
        for j, (start, end) in enumerate(self.bounds):
            if start <= position <= end:
                return j
        raise PredictionInputError(f"position {position} outside the plan")


def wsm_plan(n_universities: int, l_target: int, l_base: int) -> WsmPlan:
    """Slice the cutoff move |l_target - l_base| over n rank positions.

    The j-th slice holds floor(2*(d-j)*n / (d*(d+1))) positions, so early
    (high-score) slices are the widest and carry the smallest bias; the
    last slice absorbs the flooring remainder and ends exactly at n.
    A zero move yields the empty plan (bias 0 everywhere).
    """
    if n_universities < 1:
        raise PredictionInputError("need at least one university")
    weight = abs(l_target - l_base)
    sign = 1 if l_target >= l_base else -1
    if weight == 0:
        return WsmPlan(0, 0, (), (), sign)

    d = math.ceil((math.sqrt(1 + 8 * weight) - 1) / 2)
    while d * (d + 1) // 2 < weight:
        d += 1
    while d > 1 and (d - 1) * d // 2 >= weight:
        d -= 1

    sizes = []
    for j in range(d - 1):
        sizes.append((2 * (d - j) * n_universities) // (d * (d + 1)))
    sizes.append(n_universities - sum(sizes))

    bounds = []
    start = 1
    for size in sizes:
        bounds.append((start, start + size - 1))
        start += size
    return WsmPlan(weight, d, tuple(sizes), tuple(bounds), sign)


def sort_for_wsm(summaries) -> list[UniversitySummary]:
    """Descending admission score; ties broken by enrollment then id.

    The tie-break stands in for the out-of-band prestige ordering real
    data would provide; it only needs to be deterministic.
    """
    return sorted(
        summaries,
        key=lambda s: (-s.admission_score, -s.enrollment, s.university),
    )


def predict_wsm(
    summaries_base,
    srt_base: ScoreRankingTable,
    srt_target: ScoreRankingTable,
) -> list[Prediction]:
    """Weight-slicing predictions for every university of one base year."""
    ordered = sort_for_wsm(summaries_base)
    plan = wsm_plan(
        len(ordered), srt_target.context.ascl, srt_base.context.ascl
    )
    out = []
    for position, summary in enumerate(ordered, start=1):
        base = predict_brm(summary.admission_score, srt_base, srt_target, summary.university)
        bias = plan.bias_at(position)
        predicted = base.predicted_score + plan.sign * bias
        out.append(
            Prediction(
                university=summary.university,
                model=ModelId.WSM,
                predicted_score=predicted,
                base_years=base.base_years,
                flags=base.flags,
            )
        )
    return out


def wpm_bias(block_count: int, per_point: int) -> int:
    """Bias index: 0 when the block is thinner than the per-point average,
    else the unique j with j*per_point <= block_count < (j+1)*per_point."""
    if per_point < 1:
        raise PredictionInputError("per-point average must be >= 1")
    return block_count // per_point


def predict_wpm(
    summary: UniversitySummary,
    srt_base: ScoreRankingTable,
    srt_target: ScoreRankingTable,
) -> Prediction:
    """Weighted-point prediction for one university.

    The per-point average is ceil(admitted / score span) in the base year;
    the university's bias is how many of those averages fit into the tie
    block at its admission score. Needs a counted (exact or interpolated)
    base table for the tie block to mean anything.
    """
    ctx_base = srt_base.context
    if srt_base.provenance not in (EXACT, INTERPOLATED):
        raise PredictionInputError("weighted-point model needs a counted base table")
    span = ctx_base.highest - ctx_base.ascl
    if span <= 0:
        raise PredictionInputError("base cohort has a degenerate score span")
    per_point = math.ceil(srt_base.total / span)
    block = count_at(srt_base, summary.admission_score)
    bias = wpm_bias(block, per_point)
    sign = 1 if srt_target.context.ascl >= ctx_base.ascl else -1

    base = predict_brm(summary.admission_score, srt_base, srt_target, summary.university)
    return Prediction(
        university=summary.university,
        model=ModelId.WPM,
        predicted_score=base.predicted_score + sign * bias,
        base_years=base.base_years,
        flags=base.flags,
    )


def predict_aasm(
    a_prev1: int | None,
    a_prev2: int | None,
    university: str = "",
    base_years: tuple[int, ...] = (),
) -> Prediction:
    """Average of the last two admission scores."""
    if a_prev1 is None or a_prev2 is None:
        raise PredictionInputError(f"{university}: mean-score baseline needs both base years")
    return Prediction(
        university=university,
        model=ModelId.AASM,
        predicted_score=round_half_away((a_prev1 + a_prev2) / 2),
        base_years=base_years,
    )


def predict_aadm(
    a_prev1: int | None,
    a_prev2: int | None,
    l_target: int,
    l_prev1: int,
    l_prev2: int,
    university: str = "",
    base_years: tuple[int, ...] = (),
) -> Prediction:
    """This year's cutoff plus the average distance above the last two cutoffs."""
    if a_prev1 is None or a_prev2 is None:
        raise PredictionInputError(f"{university}: cutoff-distance baseline needs both base years")
    value = l_target + (a_prev1 + a_prev2 - l_prev1 - l_prev2) / 2
    return Prediction(
        university=university,
        model=ModelId.AADM,
        predicted_score=round_half_away(value),
        base_years=base_years,
    )


def ensemble_mean(predictions) -> Prediction:
    """Mean of per-base-year predictions for one university.

    Averaging two base years damps the alternating over/under-subscription
    cycle. Inputs must agree on the university; a single input passes
    through unchanged, mixed model families come out tagged ``ensemble``.
    """
    preds = list(predictions)
    if not preds:
        raise PredictionInputError("cannot ensemble zero predictions")
    universities = {p.university for p in preds}
    if len(universities) > 1:
        raise PredictionInputError(f"ensemble inputs mix universities: {sorted(universities)}")
    if len(preds) == 1:
        return preds[0]
    models = {p.model for p in preds}
    model = models.pop() if len(models) == 1 else ModelId.ENSEMBLE
    years = tuple(sorted({y for p in preds for y in p.base_years}))
    flags = frozenset().union(*(p.flags for p in preds)) | {FLAG_TWO_BASE_MEAN}
    return Prediction(
        university=preds[0].university,
        model=model,
        predicted_score=round_half_away(
            sum(p.predicted_score for p in preds) / len(preds)
        ),
        base_years=years,
        flags=flags,
    )


def clamp_prediction(pred: Prediction, target: CohortContext, guard: int = 10) -> Prediction:
    """Keep a prediction on the legal range [ascl - guard, highest]."""
    low, high = target.ascl - guard, target.highest
    clamped = min(max(pred.predicted_score, low), high)
    if clamped != pred.predicted_score:
        return Prediction(
            university=pred.university,
            model=pred.model,
            predicted_score=clamped,
            base_years=pred.base_years,
            flags=pred.flags | {FLAG_CLAMPED},
        )
    return pred


@dataclass(frozen=True)
class BaseYear:
    """One base year's inputs: its context, counted table and summaries."""

    context: CohortContext
    srt: ScoreRankingTable
    summaries: tuple[UniversitySummary, ...]

    def by_university(self) -> dict[str, UniversitySummary]:
        return {s.university: s for s in self.summaries}


@dataclass(frozen=True)
class PredictionInput:
    """Everything one model run needs: the target table plus 1-2 base years."""

    target: CohortContext
    srt_target: ScoreRankingTable
    bases: tuple[BaseYear, ...]
    guard: int = 10

    def __post_init__(self):
        if not self.bases:
            raise PredictionInputError("at least one base year is required")
        for base in self.bases:
            t, b = self.target, base.context
            if (t.par, t.exam_type, t.tier) != (b.par, b.exam_type, b.tier):
                raise PredictionInputError(
                    f"base cohort {b.key} does not match target {t.key}"
                )

    def ordered_bases(self) -> tuple[BaseYear, ...]:
        """Most recent base year first."""
        return tuple(sorted(self.bases, key=lambda b: -b.context.year))


def run_model(inputs: PredictionInput, model: ModelId) -> list[Prediction]:
    """Run one predictor over every university the base years cover.

    Rank-carrying models predict once per base year and average; a
    university missing from one base year is predicted from the other
    alone and flagged. The score-average baselines need both base years
    and skip universities lacking either. Output sorted by university.
    """
    bases = inputs.ordered_bases()
    target = inputs.target

    if model in (ModelId.AASM, ModelId.AADM):
        if len(bases) < 2:
            raise PredictionInputError(f"{model.value} needs two base years")
        prev1, prev2 = bases[0], bases[1]
        years = (prev1.context.year, prev2.context.year)
        map1, map2 = prev1.by_university(), prev2.by_university()
        out = []
        for university in sorted(set(map1) & set(map2)):
            a1 = map1[university].admission_score
            a2 = map2[university].admission_score
            if model is ModelId.AASM:
                pred = predict_aasm(a1, a2, university, years)
            else:
                pred = predict_aadm(
                    a1, a2, target.ascl,
                    prev1.context.ascl, prev2.context.ascl,
                    university, years,
                )
            out.append(clamp_prediction(pred, target, inputs.guard))
        return out

    per_university: dict[str, list[Prediction]] = {}
    for base in bases:
        if model is ModelId.BRM:
            batch = [
                predict_brm(s.admission_score, base.srt, inputs.srt_target, s.university)
                for s in base.summaries
            ]
        elif model is ModelId.WSM:
            batch = predict_wsm(base.summaries, base.srt, inputs.srt_target)
        elif model is ModelId.WPM:
            batch = [
                predict_wpm(s, base.srt, inputs.srt_target) for s in base.summaries
            ]
        else:
            raise PredictionInputError(f"{model.value} is not a runnable predictor")
        for pred in batch:
            per_university.setdefault(pred.university, []).append(pred)

    expected_years = len(bases)
    out = []
    for university in sorted(per_university):
        preds = per_university[university]
        combined = ensemble_mean(preds)
        if len(preds) < expected_years:
            combined = combined.with_flags(FLAG_SINGLE_BASE)
        out.append(clamp_prediction(combined, target, inputs.guard))
    return out
