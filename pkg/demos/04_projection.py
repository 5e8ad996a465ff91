"""Forecasting next year's score-ranking table before it is published.

When this year's table is simply not out yet, last year's points are
shifted along the cutoff-line move (nothing at the very top, the full
move at the old cutoff), the amended points are split into a high tail
and a bulk segment, and a trigonometric series is fitted to each. The
combined curve then yields a dense forecast table.
"""

from scoreline import CohortContext, ExamType, project_srt, rank_of, score_of
from scoreline.srt import densify_if_sparse

N = 50_000


def table_for(year, lo, hi):
    def gen(s):
        return max(1, round(N * ((hi - s) / (hi - lo)) ** 2)) if s < hi else 1
    context = CohortContext(year=year, par="demo", exam_type=ExamType.LIKE, tier=1,
                            ascl=lo, highest=hi, admitted_total=N, scale_max=750)
    return densify_if_sparse(context, [(s, gen(s)) for s in range(lo, hi + 1)])


last_year = table_for(2014, 500, 700)

# The cutoff line climbs 12 points; the top of the scale stays put.
forecast = project_srt(last_year, 512, 700)
actual = table_for(2015, 512, 700)

print(f"projected table: scores {forecast.low}..{forecast.high}, "
      f"provenance {forecast.provenance!r}")
print(f"segment split at score {forecast.curve.split_score:.1f}, "
      f"fit rms (bulk {forecast.curve.rms_residuals[0]:.1f}, "
      f"tail {forecast.curve.rms_residuals[1]:.1f})\n")

print("forecast vs. the year that actually happened:")
for rank in (100, 1_000, 5_000, 20_000, 45_000):
    f, a = score_of(forecast, rank), score_of(actual, rank)
    print(f"  rank {rank:>6}: forecast score {f}, actual {a}  (off by {abs(f - a)})")

worst = max(abs(score_of(forecast, r) - score_of(actual, r))
            for r in range(1, N + 1, 53))
print(f"\nworst score error across sampled ranks: {worst} points")

mono = all(rank_of(forecast, s) >= rank_of(forecast, s + 1)
           for s in range(forecast.low, forecast.high))
print(f"forecast table monotone: {mono}")
