"""Snapshot-to-model plumbing: resolve tables and assemble predictor inputs.

The target year's table is taken from the snapshot when present (exact or
interpolated); otherwise it is projected on demand from the previous
year's counted table, mirroring what an applicant would have to do before
the official table appears.
"""

from __future__ import annotations

from .domain import CohortKey, DataFormatError, ExamType
from .ingest import DatasetSnapshot
from .models import BaseYear, PredictionInput
from .srt import PROJECTED, ProjectionConfig, ScoreRankingTable, project_srt


def resolve_target_srt(
    snapshot: DatasetSnapshot,
    key: CohortKey,
    projection: ProjectionConfig = ProjectionConfig(),
) -> ScoreRankingTable:
    """The target cohort's table, projecting from the prior year if absent."""
    if key in snapshot.srts:
        return snapshot.srts[key]
    ctx = snapshot.context(key)
    prev_key = CohortKey(key.year - 1, key.par, key.exam_type, key.tier)
    prev = snapshot.srts.get(prev_key)
    if prev is None or prev.provenance == PROJECTED:
        raise DataFormatError(
            f"no table for {key} and no counted table for {prev_key} to project from"
        )
    return project_srt(
        prev, ctx.ascl, ctx.highest, projection, context=ctx
    )


def build_inputs(
    snapshot: DatasetSnapshot,
    par: str,
    exam_type: ExamType,
    tier: int,
    target_year: int,
    base_years,
    guard: int = 10,
    projection: ProjectionConfig = ProjectionConfig(),
) -> PredictionInput:
    """Assemble one predictor run's inputs from a loaded snapshot."""
    par = par.casefold()
    target_key = CohortKey(target_year, par, exam_type, tier)
    target_ctx = snapshot.context(target_key)
    srt_target = resolve_target_srt(snapshot, target_key, projection)

    bases = []
    for year in sorted(set(base_years), reverse=True):
        key = CohortKey(int(year), par, exam_type, tier)
        ctx = snapshot.context(key)
        srt = snapshot.srts.get(key)
        if srt is None:
            raise DataFormatError(f"no score-ranking table for base cohort {key}")
        summaries = snapshot.summaries.get(key)
        if not summaries:
            raise DataFormatError(f"no university summaries for base cohort {key}")
        bases.append(BaseYear(context=ctx, srt=srt, summaries=tuple(summaries)))
    return PredictionInput(
        target=target_ctx,
        srt_target=srt_target,
        bases=tuple(bases),
        guard=guard,
    )
