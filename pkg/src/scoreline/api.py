"""Query layer shared by the CLI and the HTTP service.

Every public function here turns a validated request into a plain-dict
payload; :func:`render_json` is the single serializer both front ends use,
so equivalent queries answer byte-for-byte identically everywhere.
"""

from __future__ import annotations

import json

from .config import AppConfig
from .domain import (
    ExamType,
    ModelId,
    ScorelineError,
    StudentPreference,
    validate_preference,
)
from .evaluate import accuracy_report, render_text
from .ingest import DatasetSnapshot
from .models import run_model
from .pipeline import build_inputs
from .recommend import recommend
from .srt import lookup


class ApiError(ScorelineError):
    """A request the API refuses; carries the HTTP status it maps to."""

    def __init__(self, message, status=400, field=None):
        super().__init__(message)
        self.status = status
        self.field = field


def render_json(payload) -> bytes:
    """The one canonical JSON encoding (stable field order, 2-space indent)."""
    return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _field(body: dict, name: str, kind, required=True, default=None):
    if name not in body or body[name] is None:
        if required:
            raise ApiError(f"missing field {name!r}", field=name)
        return default
    value = body[name]
    try:
        if kind is int:
            return int(value)
        if kind is str:
            return str(value)
        if kind == "exam":
            return ExamType.parse(str(value))
        if kind == "model":
            return ModelId.parse(str(value))
        if kind == "years":
            years = [int(v) for v in value]
            if not years:
                raise ValueError("empty")
            return years
        if kind == "strset":
            return frozenset(str(v) for v in value)
    except (TypeError, ValueError, ScorelineError) as exc:
        raise ApiError(f"bad value for {name!r}: {exc}", field=name) from None
    raise ApiError(f"unhandled field kind for {name!r}")


def _resolve_key(snapshot, par, year, exam, tier):
    from .domain import CohortKey

    key = CohortKey(int(year), str(par).casefold(), exam, int(tier))
    if key not in snapshot.contexts:
        raise ApiError(f"unknown cohort {key}", status=404)
    return key


def health_payload(snapshot: DatasetSnapshot) -> dict:
    return {"status": "ok", "contexts": len(snapshot.contexts)}


def datasets_payload(snapshot: DatasetSnapshot) -> dict:
    cohorts = []
    for key in sorted(snapshot.contexts):
        ctx = snapshot.contexts[key]
        srt = snapshot.srts.get(key)
        cohorts.append(
            {
                "par": ctx.par,
                "year": ctx.year,
                "exam_type": ctx.exam_type.value,
                "tier": ctx.tier,
                "ascl": ctx.ascl,
                "highest": ctx.highest,
                "admitted_total": ctx.admitted_total,
                "scale_max": ctx.scale_max,
                "records": len(snapshot.records.get(key, ())),
                "summaries": len(snapshot.summaries.get(key, ())),
                "srt": srt.provenance if srt else None,
            }
        )
    return {"cohorts": cohorts}


def srt_payload(
    snapshot: DatasetSnapshot,
    par: str,
    year: int,
    exam: ExamType,
    tier: int,
    score: int | None = None,
    rank: int | None = None,
) -> dict:
    key = _resolve_key(snapshot, par, year, exam, tier)
    table = snapshot.srts.get(key)
    if table is None:
        raise ApiError(f"no score-ranking table for {key}", status=404)
    if (score is None) == (rank is None):
        raise ApiError("pass exactly one of score= or rank=")
    payload = {
        "par": key.par,
        "year": key.year,
        "exam_type": key.exam_type.value,
        "tier": key.tier,
        "provenance": table.provenance,
    }
    if score is not None:
        value, flags = lookup(table, score=int(score))
        payload.update({"score": int(score), "rank": value})
    else:
        value, flags = lookup(table, rank=int(rank))
        payload.update({"rank": int(rank), "score": value})
    payload["flags"] = sorted(flags)
    return payload


def predict_payload(snapshot: DatasetSnapshot, config: AppConfig, body: dict) -> dict:
    par = _field(body, "par", str)
    exam = _field(body, "exam_type", "exam")
    tier = _field(body, "tier", int)
    target_year = _field(body, "target_year", int)
    base_years = _field(body, "base_years", "years")
    model = _field(body, "model", "model")
    guard = _field(body, "guard", int, required=False, default=config.guard)

    _resolve_key(snapshot, par, target_year, exam, tier)
    try:
        inputs = build_inputs(
            snapshot, par, exam, tier, target_year, base_years,
            guard, config.projection,
        )
        predictions = run_model(inputs, model)
    except ScorelineError as exc:
        raise ApiError(str(exc)) from None
    return {
        "model": model.value,
        "par": par.casefold(),
        "exam_type": exam.value,
        "tier": tier,
        "target_year": target_year,
        "base_years": sorted(base_years),
        "srt_provenance": inputs.srt_target.provenance,
        "predictions": [
            {
                "university": p.university,
                "predicted_score": p.predicted_score,
                "base_years": sorted(p.base_years),
                "flags": sorted(p.flags),
            }
            for p in predictions
        ],
    }


def recommend_payload(snapshot: DatasetSnapshot, config: AppConfig, body: dict) -> dict:
    par = _field(body, "par", str)
    exam = _field(body, "exam_type", "exam")
    tier = _field(body, "tier", int)
    target_year = _field(body, "target_year", int)
    base_years = _field(body, "base_years", "years")
    model = _field(body, "model", "model", required=False, default=ModelId.BRM)
    slot_count = _field(body, "j", int, required=False, default=3)
    pad = _field(body, "pad", int, required=False, default=config.pad)
    score = _field(body, "gaokao_score", int)

    key = _resolve_key(snapshot, par, target_year, exam, tier)
    scale = snapshot.contexts[key].scale_max
    prefs = StudentPreference(
        gaokao_score=score,
        exam_type=exam,
        tier=tier,
        preferred_locations=_field(body, "preferred_locations", "strset", False, frozenset()),
        disliked_locations=_field(body, "disliked_locations", "strset", False, frozenset()),
        preferred_majors=_field(body, "preferred_majors", "strset", False, frozenset()),
        disliked_majors=_field(body, "disliked_majors", "strset", False, frozenset()),
    )
    try:
        validate_preference(prefs, scale)
        inputs = build_inputs(
            snapshot, par, exam, tier, target_year, base_years,
            config.guard, config.projection,
        )
        # Most recent base year wins when a university appears in both.
        profile_map = {}
        for base in inputs.ordered_bases():
            for s in base.summaries:
                profile_map.setdefault(s.university, s)
        result = recommend(prefs, inputs, list(profile_map.values()), model, slot_count, pad)
    except ScorelineError as exc:
        raise ApiError(str(exc)) from None

    location_of = {u: s.location for u, s in profile_map.items()}

    slots = []
    for label in result.labels:
        cards = []
        for interval_set in result.placed(label):
            slot = interval_set.slot_by_label(label)
            cards.append(
                {
                    "university": interval_set.university,
                    "predicted_low": interval_set.predicted_low,
                    "predicted_high": interval_set.predicted_high,
                    "interval": [slot.low, slot.high],
                    "location": location_of.get(interval_set.university, ""),
                    "flags": sorted(interval_set.flags),
                }
            )
        slots.append({"label": label, "universities": cards})
    return {
        "model": model.value,
        "j": slot_count,
        "pad": pad,
        "gaokao_score": score,
        "target_year": target_year,
        "srt_provenance": inputs.srt_target.provenance,
        "labels": list(result.labels),
        "slots": slots,
        "diagnostics": list(result.diagnostics),
    }


def evaluate_payload(snapshot: DatasetSnapshot, config: AppConfig, body: dict) -> dict:
    target_year = _field(body, "target_year", int)
    base_years = _field(body, "base_years", "years")
    par = _field(body, "par", str, required=False)
    pd_values = body.get("pd")
    models = body.get("models")
    if models in (None, "all"):
        models = None
    elif isinstance(models, str):
        models = [m.strip() for m in models.split(",") if m.strip()]
    workers = _field(body, "workers", int, required=False, default=1)

    try:
        report = accuracy_report(
            snapshot,
            target_year,
            base_years,
            models=models,
            pd_values=pd_values,
            par=par,
            guard=config.guard,
            projection=config.projection,
            workers=workers,
        )
    except ScorelineError as exc:
        raise ApiError(str(exc)) from None
    return {
        "target_year": report.target_year,
        "par": report.par,
        "base_years": sorted(int(y) for y in base_years),
        "groups": list(report.groups),
        "pd": list(report.pd_values),
        "models": [m.value for m in report.models],
        "rows": report.rows(),
        "text": render_text(report),
        "diagnostics": list(report.diagnostics),
    }
