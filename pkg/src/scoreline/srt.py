"""Score-ranking tables: build, query, densify, and project to next year.

A score-ranking table (SRT) maps every integer score in a cohort to the
rank a student with that score would hold, where rank(s) is one plus the
number of students scoring strictly above s. Ties share a rank and the
next distinct score jumps past the whole block.

Three provenances exist:

* ``exact``        - counted directly from enrollment records;
* ``interpolated`` - densified from a sparse official table (rankings
                     published only every few points);
* ``projected``    - forecast for a year with no published data, by
                     shifting last year's points along the cutoff-line
                     move and refitting a smooth curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .domain import (
    AdmissionRecord,
    CohortContext,
    ScorelineError,
    validate_context,
)
from .fitting import TrigSeries, fit_trig_series, monotone_cubic_eval

EXACT = "exact"
INTERPOLATED = "interpolated"
PROJECTED = "projected"
PROVENANCES = (EXACT, INTERPOLATED, PROJECTED)

FLAG_ABOVE_TABLE = "above-table"
FLAG_BELOW_TABLE = "below-table"
FLAG_RANK_BEYOND_TABLE = "rank-beyond-table"


class TableError(ScorelineError):
    """The table cannot be built from the given inputs."""


@dataclass(frozen=True)
class FittedCurve:
    """The two-segment trig fit behind a projected table."""

    low_curve: TrigSeries
    high_curve: TrigSeries
    split_score: float
    flags: frozenset[str] = frozenset()

    @property
    def rms_residuals(self) -> tuple[float, float]:
        return (self.low_curve.rms_residual, self.high_curve.rms_residual)


@dataclass(frozen=True)
class AmendedTable:
    """Last year's (score, rank) points shifted along the cutoff move."""

    entries: tuple[tuple[int, int], ...]
    rh: int
    rl: int


@dataclass(frozen=True)
class ScoreRankingTable:
    """Dense integer-score table over [low, high] with nonincreasing ranks.

    ``ranks[i]`` is the rank at score ``low + i``. ``total`` is the student
    count behind the table; queries below ``low`` answer ``total + 1``.
    """

    context: CohortContext
    low: int
    high: int
    ranks: tuple[int, ...]
    provenance: str
    total: int
    curve: FittedCurve | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise TableError(f"unknown provenance {self.provenance!r}")
        if len(self.ranks) != self.high - self.low + 1:
            raise TableError("rank array does not cover [low, high]")

    def rank_array(self) -> np.ndarray:
        return np.asarray(self.ranks, dtype=np.int64)

    def entries(self):
        """(score, rank) pairs, score descending, as the on-disk format orders them."""
        for i in range(len(self.ranks) - 1, -1, -1):
            yield self.low + i, self.ranks[i]

    def scores(self) -> range:
        return range(self.low, self.high + 1)


def validate_srt(table: ScoreRankingTable) -> ScoreRankingTable:
    ranks = table.rank_array()
    if ranks.size == 0:
        raise TableError("empty table")
    if np.any(ranks < 1):
        raise TableError("ranks must be >= 1")
    if np.any(np.diff(ranks) > 0):
        raise TableError("ranks must be nonincreasing as score increases")
    if table.provenance == EXACT and table.ranks[-1] != 1:
        raise TableError("exact table must rank its highest realized score 1")
    return table


def _extract_scores(records) -> list[int]:
    scores = []
    for r in records:
        scores.append(r.score if isinstance(r, AdmissionRecord) else int(r))
    return scores


def build_srt(context: CohortContext, records) -> ScoreRankingTable:
    """Count an exact table from enrollment records (or raw scores).

    The table covers every integer score from min(ascl, lowest realized
    score) up to the highest realized score, so queries anywhere on the
    legal range agree with the counting definition even when policy admits
    sit below the cutoff line.
    """
    validate_context(context)
    scores = _extract_scores(records)
    if not scores:
        raise TableError("cannot build a table from zero records")
    sorted_scores = np.sort(np.asarray(scores, dtype=np.int64))
    low = int(min(context.ascl, sorted_scores[0]))
    high = int(sorted_scores[-1])
    domain = np.arange(low, high + 1, dtype=np.int64)
    above = sorted_scores.size - np.searchsorted(sorted_scores, domain, side="right")
    ranks = (1 + above).astype(np.int64)
    table = ScoreRankingTable(
        context=context,
        low=low,
        high=high,
        ranks=tuple(int(r) for r in ranks),
        provenance=EXACT,
        total=int(sorted_scores.size),
    )
    return validate_srt(table)


def rank_of(table: ScoreRankingTable, score: int) -> int:
    """Rank held by ``score``: one plus the count of strictly higher scores.

    Above the table the rank is 1; below it every student outranks the
    score, so the answer is ``total + 1``. Use :func:`lookup` when the
    out-of-domain flags matter.
    """
    score = int(score)
    if score > table.high:
        return 1
    if score < table.low:
        return table.total + 1
    return table.ranks[score - table.low]


def score_of(table: ScoreRankingTable, rank: int) -> int:
    """Score held by the student at ``rank``: the lowest score ranking at or above it.

    Inverse of :func:`rank_of` on realized scores. Ranks past the table
    bottom answer the lowest stored score.
    """
    rank = int(rank)
    if rank < 1:
        raise TableError(f"rank must be >= 1, got {rank}")
    ranks = table.rank_array()
    # ranks is nonincreasing; count the prefix of scores still ranked worse.
    worse = int(np.searchsorted(-ranks, -rank, side="left"))
    if worse >= ranks.size:
        # Every stored score already ranks better than asked (a forecast
        # table may not reach rank 1); the top score is the closest answer.
        return table.high
    return table.low + worse


def count_at(table: ScoreRankingTable, score: int) -> int:
    """Number of students at exactly ``score`` (width of its tie block)."""
    return abs(rank_of(table, score - 1) - rank_of(table, score))


def lookup(
    table: ScoreRankingTable,
    score: int | None = None,
    rank: int | None = None,
) -> tuple[int, frozenset[str]]:
    """Flagged query: score -> (rank, flags) or rank -> (score, flags)."""
    if (score is None) == (rank is None):
        raise TableError("lookup needs exactly one of score or rank")
    flags = set()
    if score is not None:
        if score > table.high:
            flags.add(FLAG_ABOVE_TABLE)
        elif score < table.low:
            flags.add(FLAG_BELOW_TABLE)
        return rank_of(table, score), frozenset(flags)
    if rank > table.total or rank > int(table.ranks[0]):
        flags.add(FLAG_RANK_BEYOND_TABLE)
    return score_of(table, rank), frozenset(flags)


def repair_monotone(values: np.ndarray) -> np.ndarray:
    """Force nonincreasing ranks by a running maximum from high score down."""
    return np.maximum.accumulate(values[::-1])[::-1]


def interpolate_sparse(
    context: CohortContext,
    knots,
) -> ScoreRankingTable:
    """Densify a sparse table published only every few score points.

    Shape-preserving cubic interpolation through the knots, evaluated at
    every integer score between the outermost knots, rounded to integer
    ranks and monotonicity-repaired. Knots reproduce exactly.
    """
    validate_context(context)
    pairs = sorted({(int(s), int(r)) for s, r in knots})
    if len(pairs) < 2:
        raise TableError("sparse interpolation needs at least two knots")
    xs = np.array([p[0] for p in pairs], dtype=float)
    ys = np.array([p[1] for p in pairs], dtype=float)
    if np.any(np.diff(xs) <= 0):
        raise TableError("knot scores must be distinct")
    if np.any(np.diff(ys) > 0):
        raise TableError("knot ranks must be nonincreasing as score increases")
    if np.any(ys < 1):
        raise TableError("knot ranks must be >= 1")

    low, high = int(xs[0]), int(xs[-1])
    dense_scores = np.arange(low, high + 1, dtype=float)
    dense = monotone_cubic_eval(xs, ys, dense_scores)
    ranks = np.floor(dense + 0.5).astype(np.int64)
    ranks = repair_monotone(ranks)
    table = ScoreRankingTable(
        context=context,
        low=low,
        high=high,
        ranks=tuple(int(r) for r in ranks),
        provenance=INTERPOLATED,
        total=int(context.admitted_total),
    )
    return validate_srt(table)


def amend_table(
    prev: ScoreRankingTable,
    target_ascl: int,
    target_highest: int,
) -> AmendedTable:
    """Shift last year's points along the cutoff-line move.

    With the cutoff rising by D, a point at score s moves up by
    ceil(D * (target_highest - s) / prev_span): nothing at the very top,
    the full D at the old cutoff. A falling cutoff mirrors the shift
    downward using last year's highest score as the anchor.
    """
    ctx = prev.context
    span = ctx.highest - ctx.ascl
    if span <= 0:
        raise TableError("previous cohort has a degenerate score span")
    shift = target_ascl - ctx.ascl

    entries = []
    for score, rank in prev.entries():
        if shift >= 0:
            delta = math.ceil((target_highest - score) / span * shift)
        else:
            delta = math.floor((ctx.highest - score) / span * shift)
        entries.append((score + delta, rank))
    amended_scores = [s for s, _ in entries]
    return AmendedTable(
        entries=tuple(entries),
        rh=max(amended_scores),
        rl=min(amended_scores),
    )


@dataclass(frozen=True)
class ProjectionConfig:
    order: int = 3
    rel_tol: float = 1e-8
    max_iter: int = 200


def _fit_segment(scores, ranks, config: ProjectionConfig):
    """Fit one segment, shrinking the series order to what the data supports."""
    n = len(scores)
    order = min(config.order, max((n - 2) // 2, 0))
    series = fit_trig_series(
        scores, ranks, order=order, rel_tol=config.rel_tol, max_iter=config.max_iter
    )
    reduced = order < config.order
    return series, reduced


def project_srt(
    prev: ScoreRankingTable,
    target_ascl: int,
    target_highest: int,
    config: ProjectionConfig = ProjectionConfig(),
    target_year: int | None = None,
    context: CohortContext | None = None,
) -> ScoreRankingTable:
    """Forecast a table for a year with no published ranking data.

    Amends last year's points along the cutoff move, splits the amended
    table at the top fifth of its score span (the high tail bends too
    sharply to share a curve with the bulk), fits a trigonometric series
    to each segment, then samples the combined curve at every integer
    score on the new [ascl, highest] range. Ranks are rounded, repaired
    to be monotone and clamped to last year's admitted count.
    """
    if prev.provenance == PROJECTED:
        raise TableError("refusing to project from an already projected table")
    amended = amend_table(prev, target_ascl, target_highest)
    if amended.rh - amended.rl < 2:
        raise TableError("amended table span too small to fit")

    split = amended.rh - (amended.rh - amended.rl) / 5.0
    high_pts = [(s, r) for s, r in amended.entries if s >= split]
    low_pts = [(s, r) for s, r in amended.entries if s < split]

    flags = set()
    high_curve, reduced_high = _fit_segment(
        [s for s, _ in high_pts], [r for _, r in high_pts], config
    )
    low_curve, reduced_low = _fit_segment(
        [s for s, _ in low_pts], [r for _, r in low_pts], config
    )
    if reduced_high:
        flags.add("reduced-order-high")
    if reduced_low:
        flags.add("reduced-order-low")

    dense_scores = np.arange(target_ascl, target_highest + 1, dtype=float)
    values = np.where(
        dense_scores >= split, high_curve(dense_scores), low_curve(dense_scores)
    )
    ranks = np.floor(values + 0.5).astype(np.int64)
    ranks = repair_monotone(ranks)
    ranks = np.clip(ranks, 1, prev.total)

    if context is None:
        # The target admitted count is unknown at projection time; carrying
        # last year's total is exactly the stable-quota assumption.
        prev_ctx = prev.context
        context = replace(
            prev_ctx,
            year=target_year if target_year is not None else prev_ctx.year + 1,
            ascl=int(target_ascl),
            highest=int(target_highest),
        )
    elif (context.ascl, context.highest) != (target_ascl, target_highest):
        raise TableError("given target context disagrees with the projection bounds")
    validate_context(context)
    table = ScoreRankingTable(
        context=context,
        low=int(target_ascl),
        high=int(target_highest),
        ranks=tuple(int(r) for r in ranks),
        provenance=PROJECTED,
        total=prev.total,
        curve=FittedCurve(
            low_curve=low_curve,
            high_curve=high_curve,
            split_score=float(split),
            flags=frozenset(flags),
        ),
    )
    return validate_srt(table)


def densify_if_sparse(
    context: CohortContext,
    pairs,
    provenance: str = EXACT,
) -> ScoreRankingTable:
    """Build a table from file pairs: interpolates when the scores are gappy.

    ``provenance`` labels a dense file (from sidecar metadata when present);
    gappy files always come out ``interpolated``.
    """
    ordered = sorted((int(s), int(r)) for s, r in pairs)
    if not ordered:
        raise TableError("empty table file")
    if len(ordered) >= 2:
        gaps = [b[0] - a[0] for a, b in zip(ordered, ordered[1:])]
        if max(gaps) > 1:
            return interpolate_sparse(context, ordered)
    low = ordered[0][0]
    high = ordered[-1][0]
    if len(ordered) != high - low + 1:
        raise TableError("dense table has duplicate scores")
    ranks = tuple(r for _, r in ordered)
    table = ScoreRankingTable(
        context=context,
        low=low,
        high=high,
        ranks=ranks,
        provenance=provenance,
        total=int(context.admitted_total),
    )
    return validate_srt(table)
