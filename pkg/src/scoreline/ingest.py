"""Parsing, validation and aggregation of the on-disk dataset formats.

All files are UTF-8 CSV with a mandatory header naming exactly the
expected columns:

* ``contexts.csv``   - year,par,exam_type,tier,ascl,highest,admitted_total,scale_max
* ``enrollment.csv`` - year,par,exam_type,tier,university,major,score
* ``summaries.csv``  - year,par,exam_type,tier,university,admission_score,highest_score,enrollment,location
* ``srt_*.csv``      - score,rank (strictly decreasing score; sparse tables allowed)

Rows referencing a cohort absent from the declared context list are
rejected, never silently created. When both enrollment records and a
summaries file cover the same cohort, the aggregation computed from
records wins and the conflict is reported.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .domain import (
    AdmissionRecord,
    CohortContext,
    CohortKey,
    DataFormatError,
    ExamType,
    UniversitySummary,
    normalize_university,
    validate_context,
    validate_record,
    validate_summary,
)
from .outliers import (
    DOUBLE_MAD,
    NO_FILTER,
    SINGLE_MAD,
    FILTER_METHODS,
    MadConfig,
    filter_scores,
)
from .srt import ScoreRankingTable, build_srt, densify_if_sparse

CONTEXT_COLUMNS = [
    "year", "par", "exam_type", "tier",
    "ascl", "highest", "admitted_total", "scale_max",
]
ENROLLMENT_COLUMNS = ["year", "par", "exam_type", "tier", "university", "major", "score"]
SUMMARY_COLUMNS = [
    "year", "par", "exam_type", "tier", "university",
    "admission_score", "highest_score", "enrollment", "location",
]
SRT_COLUMNS = ["score", "rank"]

#: Fewest scores each filter needs; smaller admit lists pass through unfiltered.
_MIN_FILTER_SIZE = {SINGLE_MAD: 3, DOUBLE_MAD: 5}


@dataclass(frozen=True)
class DatasetSnapshot:
    """Everything loaded from one data directory, immutable after load.

    ``records`` and ``summaries`` are grouped by cohort key; ``srts`` maps
    each key to its score-ranking table. ``notes`` collects non-fatal
    load diagnostics (conflicts, skipped universities).
    """

    contexts: dict[CohortKey, CohortContext]
    records: dict[CohortKey, tuple[AdmissionRecord, ...]] = field(default_factory=dict)
    summaries: dict[CohortKey, tuple[UniversitySummary, ...]] = field(default_factory=dict)
    srts: dict[CohortKey, ScoreRankingTable] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def context(self, key: CohortKey) -> CohortContext:
        try:
            return self.contexts[key]
        except KeyError:
            raise DataFormatError(f"unknown cohort {key}") from None

    def summaries_by_university(self, key: CohortKey) -> dict[str, UniversitySummary]:
        return {s.university: s for s in self.summaries.get(key, ())}


def _open_rows(path, columns):
    path = Path(path)
    if not path.exists():
        raise DataFormatError("file does not exist", path=path)
    text = path.read_text(encoding="utf-8")
    return _rows_from_text(text, columns, path)


def _rows_from_text(text, columns, path=None):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("empty file (missing header)", path=path) from None
    header = [h.strip() for h in header]
    if header != columns:
        raise DataFormatError(
            f"bad header {header!r}, expected {columns!r}", path=path, line=1
        )
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(columns):
            raise DataFormatError(
                f"expected {len(columns)} fields, got {len(row)}", path=path, line=lineno
            )
        rows.append((lineno, [cell.strip() for cell in row]))
    if not rows:
        raise DataFormatError("no data rows", path=path)
    return rows


def _int(cell, name, path, lineno):
    try:
        return int(cell)
    except ValueError:
        raise DataFormatError(f"{name} must be an integer, got {cell!r}", path=path, line=lineno) from None


def _key_from_cells(cells, path, lineno) -> CohortKey:
    year = _int(cells[0], "year", path, lineno)
    par = cells[1].casefold()
    try:
        exam = ExamType.parse(cells[2])
    except Exception as exc:
        raise DataFormatError(str(exc), path=path, line=lineno) from None
    tier = _int(cells[3], "tier", path, lineno)
    if tier not in (1, 2, 3):
        raise DataFormatError(f"tier out of range: {tier}", path=path, line=lineno)
    return CohortKey(year, par, exam, tier)


def _check_known(key, contexts, path, lineno):
    if contexts is not None and key not in contexts:
        raise DataFormatError(f"row references undeclared cohort {key}", path=path, line=lineno)


def parse_contexts(path) -> dict[CohortKey, CohortContext]:
    """Read the declared cohort list; every other file is checked against it."""
    contexts: dict[CohortKey, CohortContext] = {}
    for lineno, cells in _open_rows(path, CONTEXT_COLUMNS):
        key = _key_from_cells(cells, path, lineno)
        ctx = CohortContext(
            year=key.year,
            par=key.par,
            exam_type=key.exam_type,
            tier=key.tier,
            ascl=_int(cells[4], "ascl", path, lineno),
            highest=_int(cells[5], "highest", path, lineno),
            admitted_total=_int(cells[6], "admitted_total", path, lineno),
            scale_max=_int(cells[7], "scale_max", path, lineno),
        )
        try:
            validate_context(ctx)
        except Exception as exc:
            raise DataFormatError(str(exc), path=path, line=lineno) from None
        if key in contexts:
            raise DataFormatError(f"duplicate cohort {key}", path=path, line=lineno)
        contexts[key] = ctx
    return contexts


def parse_enrollment(path, contexts=None) -> list[AdmissionRecord]:
    """One admission record per data row, row order preserved."""
    records = []
    for lineno, cells in _open_rows(path, ENROLLMENT_COLUMNS):
        key = _key_from_cells(cells, path, lineno)
        _check_known(key, contexts, path, lineno)
        record = AdmissionRecord(
            key=key,
            university=normalize_university(cells[4]),
            major=cells[5],
            score=_int(cells[6], "score", path, lineno),
        )
        if contexts is not None:
            try:
                validate_record(record, contexts[key])
            except Exception as exc:
                raise DataFormatError(str(exc), path=path, line=lineno) from None
        records.append(record)
    return records


def parse_summaries(path, contexts=None) -> list[UniversitySummary]:
    """One university summary per row; (cohort, university) pairs must be unique."""
    summaries = []
    seen: set[tuple[CohortKey, str]] = set()
    for lineno, cells in _open_rows(path, SUMMARY_COLUMNS):
        key = _key_from_cells(cells, path, lineno)
        _check_known(key, contexts, path, lineno)
        university = normalize_university(cells[4])
        if (key, university) in seen:
            raise DataFormatError(
                f"duplicate summary for {university} in {key}", path=path, line=lineno
            )
        seen.add((key, university))
        summary = UniversitySummary(
            key=key,
            university=university,
            admission_score=_int(cells[5], "admission_score", path, lineno),
            highest_score=_int(cells[6], "highest_score", path, lineno),
            enrollment=_int(cells[7], "enrollment", path, lineno),
            location=cells[8],
        )
        if summary.admission_score > summary.highest_score:
            raise DataFormatError(
                f"{university}: admission_score {summary.admission_score} "
                f"> highest_score {summary.highest_score}",
                path=path,
                line=lineno,
            )
        if contexts is not None:
            try:
                validate_summary(summary, contexts[key])
            except Exception as exc:
                raise DataFormatError(str(exc), path=path, line=lineno) from None
        summaries.append(summary)
    return summaries


def parse_srt_pairs(path) -> list[tuple[int, int]]:
    """(score, rank) pairs; scores strictly decreasing, ranks nondecreasing."""
    pairs = []
    for lineno, cells in _open_rows(path, SRT_COLUMNS):
        score = _int(cells[0], "score", path, lineno)
        rank = _int(cells[1], "rank", path, lineno)
        if pairs:
            prev_score, prev_rank = pairs[-1]
            if score >= prev_score:
                raise DataFormatError(
                    f"scores must strictly decrease ({score} after {prev_score})",
                    path=path,
                    line=lineno,
                )
            if rank < prev_rank:
                raise DataFormatError(
                    f"ranks must not decrease ({rank} after {prev_rank})",
                    path=path,
                    line=lineno,
                )
        pairs.append((score, rank))
    return pairs


# --- serialization (round-trips with the parsers above) -------------------


def write_contexts(contexts, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CONTEXT_COLUMNS)
        for ctx in sorted(contexts, key=lambda c: c.key):
            writer.writerow([
                ctx.year, ctx.par, ctx.exam_type.value, ctx.tier,
                ctx.ascl, ctx.highest, ctx.admitted_total, ctx.scale_max,
            ])


def write_enrollment(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ENROLLMENT_COLUMNS)
        for r in records:
            writer.writerow([
                r.key.year, r.key.par, r.key.exam_type.value, r.key.tier,
                r.university, r.major, r.score,
            ])


def write_summaries(summaries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for s in summaries:
            writer.writerow([
                s.key.year, s.key.par, s.key.exam_type.value, s.key.tier,
                s.university, s.admission_score, s.highest_score,
                s.enrollment, s.location,
            ])


def write_srt(table: ScoreRankingTable, path) -> None:
    """Write score,rank rows plus a sidecar .meta recording provenance."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SRT_COLUMNS)
        for score, rank in table.entries():
            writer.writerow([score, rank])
    ctx = table.context
    meta = path.with_suffix(path.suffix + ".meta")
    meta.write_text(
        "".join(
            f"{k} = {v}\n"
            for k, v in [
                ("provenance", table.provenance),
                ("year", ctx.year),
                ("par", ctx.par),
                ("exam_type", ctx.exam_type.value),
                ("tier", ctx.tier),
                ("total", table.total),
            ]
        ),
        encoding="utf-8",
    )


def read_srt_meta(path) -> dict[str, str]:
    meta_path = Path(str(path) + ".meta")
    meta: dict[str, str] = {}
    if meta_path.exists():
        for line in meta_path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            k, v = line.split("=", 1)
            meta[k.strip()] = v.strip()
    return meta


# --- aggregation -----------------------------------------------------------


def summarize(
    records,
    filter_method: str = NO_FILTER,
    mad_config: MadConfig = MadConfig(),
    notes: list[str] | None = None,
) -> list[UniversitySummary]:
    """Aggregate records of one cohort into per-university summaries.

    Outlier filtering runs per university before taking min/max/count.
    Universities with fewer scores than the filter needs keep all scores;
    a university whose every score is removed is excluded and reported via
    ``notes``. Output is sorted by university id and independent of the
    input record order.
    """
    if filter_method not in FILTER_METHODS:
        raise ValueError(f"unknown filter method {filter_method!r}")
    if not records:
        return []
    keys = {r.key for r in records}
    if len(keys) > 1:
        raise DataFormatError(f"records span multiple cohorts: {sorted(map(str, keys))}")
    key = next(iter(keys))

    by_university: dict[str, list[AdmissionRecord]] = {}
    for r in records:
        by_university.setdefault(r.university, []).append(r)

    out = []
    for university in sorted(by_university):
        rows = by_university[university]
        scores = [r.score for r in rows]
        minimum = _MIN_FILTER_SIZE.get(filter_method)
        if minimum is not None and len(scores) < minimum:
            kept = sorted(scores)
            if notes is not None:
                notes.append(
                    f"{key}/{university}: only {len(scores)} scores, "
                    f"{filter_method} skipped"
                )
        else:
            report = filter_scores(scores, filter_method, mad_config)
            kept = list(report.kept)
        if not kept:
            if notes is not None:
                notes.append(f"{key}/{university}: all scores filtered, excluded")
            continue
        majors = frozenset(r.major for r in rows if r.major)
        out.append(
            UniversitySummary(
                key=key,
                university=university,
                admission_score=kept[0],
                highest_score=kept[-1],
                enrollment=len(kept),
                majors=majors,
            )
        )
    return out


def load_snapshot(
    data_dir,
    filter_method: str = SINGLE_MAD,
    mad_config: MadConfig = MadConfig(),
) -> DatasetSnapshot:
    """Load a data directory into an immutable snapshot.

    Reads contexts.csv (required), enrollment.csv and summaries.csv when
    present, and every srt_*.csv. Cohorts with records get an exact table
    built from them and record-derived summaries; a summaries-file entry
    for such a cohort is reported as a conflict and superseded.
    """
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise DataFormatError(f"data directory does not exist: {data_dir}")
    contexts = parse_contexts(data_dir / "contexts.csv")
    notes: list[str] = []

    records_by_key: dict[CohortKey, tuple[AdmissionRecord, ...]] = {}
    enrollment_path = data_dir / "enrollment.csv"
    if enrollment_path.exists():
        grouped: dict[CohortKey, list[AdmissionRecord]] = {}
        for record in parse_enrollment(enrollment_path, contexts):
            grouped.setdefault(record.key, []).append(record)
        records_by_key = {k: tuple(v) for k, v in grouped.items()}

    file_summaries: dict[CohortKey, list[UniversitySummary]] = {}
    summaries_path = data_dir / "summaries.csv"
    if summaries_path.exists():
        for summary in parse_summaries(summaries_path, contexts):
            file_summaries.setdefault(summary.key, []).append(summary)

    summaries_by_key: dict[CohortKey, tuple[UniversitySummary, ...]] = {}
    for key, recs in records_by_key.items():
        derived = summarize(recs, filter_method, mad_config, notes)
        if key in file_summaries:
            notes.append(
                f"{key}: summaries file superseded by aggregation from records"
            )
        summaries_by_key[key] = tuple(derived)
    for key, rows in file_summaries.items():
        if key not in summaries_by_key:
            summaries_by_key[key] = tuple(sorted(rows, key=lambda s: s.university))

    srts: dict[CohortKey, ScoreRankingTable] = {}
    for path in sorted(data_dir.glob("srt_*.csv")):
        stem = path.stem  # srt_<par>_<year>_<exam>_<tier>
        parts = stem.split("_")
        if len(parts) != 5:
            raise DataFormatError(
                "srt file name must be srt_<par>_<year>_<exam>_<tier>.csv", path=path
            )
        key = CohortKey(int(parts[2]), parts[1].casefold(), ExamType.parse(parts[3]), int(parts[4]))
        if key not in contexts:
            raise DataFormatError(f"srt file references undeclared cohort {key}", path=path)
        meta = read_srt_meta(path)
        pairs = parse_srt_pairs(path)
        srts[key] = densify_if_sparse(contexts[key], pairs, meta.get("provenance", "exact"))

    for key, recs in records_by_key.items():
        if key not in srts:
            srts[key] = build_srt(contexts[key], recs)

    return DatasetSnapshot(
        contexts=contexts,
        records=records_by_key,
        summaries=summaries_by_key,
        srts=srts,
        notes=tuple(notes),
    )
