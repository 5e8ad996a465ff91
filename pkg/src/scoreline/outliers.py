"""Robust outlier filtering of admit scores via median absolute deviation.

Policy admits (minority-nationality, rural-talent and similar low-score
admissions) drag a university's minimum admit score down and poison the
score line; the occasional high scorer who picked a modest university for
its location does the same at the top. Both tests below flag such scores
from the per-university admit list before aggregation.

The double test splits the sorted scores into a low and a high half and
tests each side against its own half-median and half-scale, which keeps a
heavy tail on one side from masking outliers on the other.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .domain import ScorelineError


class FilterError(ScorelineError):
    """The input is too small for the requested test."""


#: Consistency constant mapping MAD to a normal-scale estimate.
DEFAULT_CONSISTENCY = 0.6745
#: Rejection threshold on the scaled deviation statistic.
DEFAULT_THRESHOLD = 2.24

SINGLE_MAD = "single-mad"
DOUBLE_MAD = "double-mad"
NO_FILTER = "none"
FILTER_METHODS = (NO_FILTER, SINGLE_MAD, DOUBLE_MAD)


@dataclass(frozen=True)
class MadConfig:
    consistency: float = DEFAULT_CONSISTENCY
    threshold: float = DEFAULT_THRESHOLD
    #: What to do when a side's MAD is zero: keep everything (flagged) or
    #: just flag without deciding. Removal on a zero scale is never safe.
    zero_mad_policy: str = "keep_all"

    def __post_init__(self):
        if self.consistency <= 0 or self.threshold <= 0:
            raise ValueError("MAD consistency and threshold must be positive")
        if self.zero_mad_policy not in ("keep_all", "flag_only"):
            raise ValueError(f"unknown zero_mad_policy {self.zero_mad_policy!r}")


@dataclass(frozen=True)
class FilterReport:
    """Outcome of one filtering pass over one university's scores.

    ``kept`` and ``removed`` partition the input multiset; each removed
    entry carries the statistic that crossed the threshold. ``medians``
    holds the centers used: (overall,) for the single test and
    (overall, low-half, high-half) for the double test.
    """

    method: str
    kept: tuple[int, ...]
    removed: tuple[tuple[int, float], ...]
    medians: tuple[float, ...]
    flags: frozenset[str] = frozenset()

    @property
    def removed_scores(self) -> tuple[int, ...]:
        return tuple(score for score, _ in self.removed)


def _median(values) -> float:
    # Even-length median is the mean of the two middle values (may be .5).
    return statistics.median(values)


def single_mad_filter(scores, cfg: MadConfig = MadConfig()) -> FilterReport:
    """One-shot single MAD test; removes scores far from the overall median.

    A score is removed when consistency * |score - median| / MAD reaches
    the threshold. Requires at least 3 scores. Zero MAD (half the scores
    identical) falls back to the configured zero-MAD policy.
    """
    values = sorted(int(s) for s in scores)
    m = len(values)
    if m < 3:
        raise FilterError(f"single MAD test needs >= 3 scores, got {m}")

    center = _median(values)
    deviations = [abs(s - center) for s in values]
    mad = _median(deviations)
    if mad == 0:
        return FilterReport(
            method=SINGLE_MAD,
            kept=tuple(values),
            removed=(),
            medians=(center,),
            flags=frozenset({"zero-mad"}),
        )

    kept, removed = [], []
    for s, dev in zip(values, deviations):
        statistic = cfg.consistency * dev / mad
        if statistic >= cfg.threshold:
            removed.append((s, statistic))
        else:
            kept.append(s)
    return FilterReport(
        method=SINGLE_MAD,
        kept=tuple(kept),
        removed=tuple(removed),
        medians=(center,),
    )


def double_mad_filter(scores, cfg: MadConfig = MadConfig()) -> FilterReport:
    """One-shot double MAD test with separate low-side and high-side scales.

    The sorted scores split into the first floor(m/2) (low half) and the
    rest (high half). Each score at or below the overall median is tested
    against the low-half median with the low-side MAD; scores above it
    against the high-half median with the high-side MAD. Deviations feeding
    both MADs are taken from the overall median. Requires at least 5 scores.
    """
    values = sorted(int(s) for s in scores)
    m = len(values)
    if m < 5:
        raise FilterError(f"double MAD test needs >= 5 scores, got {m}")

    center = _median(values)
    half = m // 2
    low_half, high_half = values[:half], values[half:]
    low_center = _median(low_half)
    high_center = _median(high_half)

    deviations = [abs(s - center) for s in values]
    mad_low = _median(deviations[:half])
    mad_high = _median(deviations[half:])

    flags = set()
    if mad_low == 0:
        flags.add("zero-mad-low")
    if mad_high == 0:
        flags.add("zero-mad-high")

    kept, removed = [], []
    for s in values:
        if s <= center:
            scale, side_center = mad_low, low_center
        else:
            scale, side_center = mad_high, high_center
        if scale == 0:
            kept.append(s)  # zero scale: keep, the flag records the ambiguity
            continue
        statistic = cfg.consistency * abs(s - side_center) / scale
        if statistic >= cfg.threshold:
            removed.append((s, statistic))
        else:
            kept.append(s)
    return FilterReport(
        method=DOUBLE_MAD,
        kept=tuple(kept),
        removed=tuple(removed),
        medians=(center, low_center, high_center),
        flags=frozenset(flags),
    )


def filter_scores(scores, method: str, cfg: MadConfig = MadConfig()) -> FilterReport:
    """Dispatch on a filter method id: none, single-mad or double-mad."""
    if method == NO_FILTER:
        values = tuple(sorted(int(s) for s in scores))
        return FilterReport(method=NO_FILTER, kept=values, removed=(), medians=())
    if method == SINGLE_MAD:
        return single_mad_filter(scores, cfg)
    if method == DOUBLE_MAD:
        return double_mad_filter(scores, cfg)
    raise ValueError(f"unknown filter method {method!r} (expected one of {FILTER_METHODS})")
