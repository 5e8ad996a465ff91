"""Point-difference accuracy and the model-comparison report.

A prediction counts as correct within tolerance PD when the absolute gap
to the true admission score is at most PD points. The report grids
model x PD x group, where a group is one (exam type, tier) slice such as
LK1, and prints one percentage per cell at one decimal.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .domain import ExamType, ModelId, ScorelineError, round_half_away
from .ingest import DatasetSnapshot
from .models import run_model
from .pipeline import build_inputs
from .srt import ProjectionConfig

PD_DEFAULTS = {750: (5, 6, 7), 480: (3, 4, 5)}

#: Report row order within each PD block.
REPORT_MODEL_ORDER = (ModelId.AASM, ModelId.AADM, ModelId.BRM, ModelId.WSM, ModelId.WPM)


class EvaluationError(ScorelineError):
    pass


@dataclass(frozen=True)
class AccuracyCell:
    """One percentage: a model's hit rate at tolerance ``pd`` in one group."""

    model: ModelId
    pd: int
    group: str
    percentage: float
    numerator: int
    denominator: int
    coverage_dropped: int = 0


def format_pct(value: float) -> str:
    """One decimal, ties away from zero (86.25 -> '86.3')."""
    return f"{round_half_away(value * 10) / 10:.1f}"


def pd_accuracy(
    predictions,
    truths: dict[str, int],
    pd: int,
    model: ModelId = ModelId.BRM,
    group: str = "",
) -> AccuracyCell:
    """Fraction of universities predicted within ``pd`` points of the truth.

    ``predictions`` may be Prediction objects or a university -> score
    mapping. Universities lacking a truth value are dropped from the
    denominator and counted in ``coverage_dropped``.
    """
    if pd < 0:
        raise EvaluationError("pd tolerance must be >= 0")
    if isinstance(predictions, dict):
        predicted = dict(predictions)
    else:
        predicted = {p.university: p.predicted_score for p in predictions}
    shared = sorted(set(predicted) & set(truths))
    dropped = len(predicted) - len(shared)
    if not shared:
        raise EvaluationError("predictions and truths share no universities")
    hits = sum(1 for u in shared if abs(predicted[u] - truths[u]) <= pd)
    return AccuracyCell(
        model=model,
        pd=pd,
        group=group,
        percentage=100.0 * hits / len(shared),
        numerator=hits,
        denominator=len(shared),
        coverage_dropped=dropped,
    )


@dataclass(frozen=True)
class AccuracyReport:
    target_year: int
    par: str
    groups: tuple[str, ...]
    pd_values: tuple[int, ...]
    models: tuple[ModelId, ...]
    cells: tuple[AccuracyCell, ...]
    diagnostics: tuple[str, ...] = ()

    def cell(self, model: ModelId, pd: int, group: str) -> AccuracyCell | None:
        for c in self.cells:
            if c.model is model and c.pd == pd and c.group == group:
                return c
        return None

    def rows(self) -> list[dict]:
        """Machine-readable rows: model,pd,group,percentage,numerator,denominator."""
        return [
            {
                "model": c.model.value,
                "pd": c.pd,
                "group": c.group,
                "percentage": float(format_pct(c.percentage)),
                "numerator": c.numerator,
                "denominator": c.denominator,
            }
            for c in self.cells
        ]


def _group_sort_key(ctx):
    return (ctx.tier, 0 if ctx.exam_type is ExamType.LIKE else 1)


def _truths(snapshot, key) -> dict[str, int]:
    return {
        s.university: s.admission_score for s in snapshot.summaries.get(key, ())
    }


def accuracy_report(
    snapshot: DatasetSnapshot,
    target_year: int,
    base_years,
    models=None,
    pd_values=None,
    par: str | None = None,
    guard: int = 10,
    projection: ProjectionConfig = ProjectionConfig(),
    workers: int = 1,
) -> AccuracyReport:
    """Grid every requested model against the target year's true score lines.

    Groups are the (exam type, tier) cohorts declared for the target year
    (optionally narrowed to one region). Rank-carrying models average the
    per-base-year predictions when two base years are given; the
    score-average baselines always need both and are dropped (with a
    diagnostic) otherwise. Cell computation is order-independent, so a
    thread pool may fan out without changing a byte of the report.
    """
    base_years = tuple(sorted(set(int(y) for y in base_years), reverse=True))
    if models is None:
        models = REPORT_MODEL_ORDER
    models = tuple(ModelId.parse(m) if isinstance(m, str) else m for m in models)

    target_ctxs = [
        ctx
        for ctx in snapshot.contexts.values()
        if ctx.year == target_year and (par is None or ctx.par == par.casefold())
    ]
    if not target_ctxs:
        raise EvaluationError(f"no cohorts declared for target year {target_year}")
    target_ctxs.sort(key=_group_sort_key)
    groups = tuple(ctx.group_label for ctx in target_ctxs)
    pars = {ctx.par for ctx in target_ctxs}
    if len(pars) > 1:
        raise EvaluationError(f"target year spans regions {sorted(pars)}; pick one with par=")
    region = pars.pop()

    if pd_values is None:
        pd_values = PD_DEFAULTS.get(target_ctxs[0].scale_max, (5, 6, 7))
    pd_values = tuple(sorted(set(int(p) for p in pd_values)))

    diagnostics: list[str] = []
    usable_models = list(models)
    if len(base_years) < 2:
        for m in (ModelId.AASM, ModelId.AADM):
            if m in usable_models:
                usable_models.remove(m)
                diagnostics.append(f"{m.value}: needs two base years, skipped")

    tasks = []
    for ctx in target_ctxs:
        inputs = build_inputs(
            snapshot, ctx.par, ctx.exam_type, ctx.tier,
            target_year, base_years, guard, projection,
        )
        truths = _truths(snapshot, ctx.key)
        if not truths:
            diagnostics.append(f"{ctx.group_label}: no target-year truths, cells omitted")
            continue
        if inputs.srt_target.provenance != "exact":
            diagnostics.append(
                f"{ctx.group_label}: target table is {inputs.srt_target.provenance}"
            )
        for model in usable_models:
            tasks.append((ctx.group_label, model, inputs, truths))

    def run(task) -> list[AccuracyCell]:
        group, model, inputs, truths = task
        predictions = run_model(inputs, model)
        return [
            pd_accuracy(predictions, truths, pd, model, group) for pd in pd_values
        ]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run, tasks))
    else:
        batches = [run(t) for t in tasks]

    cells = [cell for batch in batches for cell in batch]
    model_order = {m: i for i, m in enumerate(REPORT_MODEL_ORDER)}
    group_order = {g: i for i, g in enumerate(groups)}
    cells.sort(
        key=lambda c: (c.pd, model_order.get(c.model, 99), group_order.get(c.group, 99))
    )
    return AccuracyReport(
        target_year=target_year,
        par=region,
        groups=groups,
        pd_values=pd_values,
        models=tuple(m for m in REPORT_MODEL_ORDER if m in usable_models),
        cells=tuple(cells),
        diagnostics=tuple(diagnostics),
    )


def render_text(report: AccuracyReport) -> str:
    """Human-readable grid: PD blocks of model rows, one group per column."""
    headers = ["Model", "PD"] + [f"{g} (%)" for g in report.groups]
    widths = [max(6, len(h)) for h in headers]
    lines = []

    def fmt_row(cells):
        return "  ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip()

    lines.append(fmt_row(headers))
    lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
    for pd in report.pd_values:
        for model in report.models:
            row = [model.value.upper(), pd]
            for group in report.groups:
                cell = report.cell(model, pd, group)
                row.append(format_pct(cell.percentage) if cell else "-")
            lines.append(fmt_row(row))
        lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
    for note in report.diagnostics:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def render_csv(report: AccuracyReport) -> str:
    """Machine-readable rows matching the documented column order."""
    lines = ["model,pd,group,percentage,numerator,denominator"]
    for row in report.rows():
        lines.append(
            f"{row['model']},{row['pd']},{row['group']},"
            f"{format_pct(row['percentage'])},{row['numerator']},{row['denominator']}"
        )
    return "\n".join(lines) + "\n"
