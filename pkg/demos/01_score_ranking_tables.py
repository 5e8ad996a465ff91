"""Score-ranking tables: the rank a score holds, and the score a rank holds.

A cohort's table maps each integer score to 1 + (number of students who
scored strictly higher). Thousands of students can tie on one score, so
the two directions are only inverse on scores someone actually holds.
"""

import numpy as np

from scoreline import CohortContext, ExamType, build_srt, count_at, rank_of, score_of

rng = np.random.default_rng(0)
scores = np.clip(rng.normal(590, 38, 30_000).astype(int), 500, 700)
scores[0], scores[-1] = 700, 500

context = CohortContext(year=2015, par="demo", exam_type=ExamType.LIKE, tier=1,
                        ascl=500, highest=700, admitted_total=len(scores),
                        scale_max=750)
table = build_srt(context, scores.tolist())

print(f"cohort of {table.total} students over scores {table.low}..{table.high}\n")

print("score -> rank, then back through the tie block:")
for s in (700, 660, 620, 580, 540):
    r = rank_of(table, s)
    print(f"  score {s}: rank {r:>6}  ({count_at(table, s):>4} students tied)"
          f"  score_of(rank) -> {score_of(table, r)}")

print("\nduality on realized scores: score_of(rank_of(s)) == s")
realized = sorted(set(scores.tolist()))
assert all(score_of(table, rank_of(table, s)) == s for s in realized)
print(f"  holds for all {len(realized)} realized scores")

print("\nqueries off the table are answered, with the obvious convention:")
print(f"  rank_of(740) = {rank_of(table, 740)}   (above everyone ranked)")
print(f"  rank_of(460) = {rank_of(table, 460)}   (below everyone: total + 1)")
