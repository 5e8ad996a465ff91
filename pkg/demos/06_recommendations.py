"""A student's what-if loop: score and preferences in, A/B/C lists out.

For each eligible university the engine predicts this year's score
interval, pads it, slices it into J contiguous buckets, and files the
university under whichever bucket holds the student's score: A is the
reach list, the last letter the safe list.
"""

import numpy as np

from scoreline import (
    CohortContext,
    ExamType,
    ModelId,
    StudentPreference,
    UniversitySummary,
    build_srt,
    recommend,
)
from scoreline.models import BaseYear, PredictionInput

rng = np.random.default_rng(12)
ctx_2014 = CohortContext(year=2014, par="demo", exam_type=ExamType.LIKE, tier=1,
                         ascl=520, highest=700, admitted_total=20_000, scale_max=750)
ctx_2015 = CohortContext(year=2015, par="demo", exam_type=ExamType.LIKE, tier=1,
                         ascl=524, highest=700, admitted_total=20_000, scale_max=750)

scores_2014 = np.clip(rng.normal(585, 40, 20_000).astype(int), 520, 700)
scores_2014[0], scores_2014[-1] = 700, 520
scores_2015 = np.clip(scores_2014 + 4, 524, 700)

srt_2014 = build_srt(ctx_2014, scores_2014.tolist())
srt_2015 = build_srt(ctx_2015, scores_2015.tolist())

towns = ("beijing", "shanghai", "wuhan", "xian", "chengdu", "nanjing")
majors = ({"cs", "math"}, {"economics"}, {"physics", "math"},
          {"history"}, {"cs"}, {"literature", "history"})
profiles = []
for i, line in enumerate(range(660, 540, -10)):
    line = int(scores_2014[np.abs(scores_2014 - line).argmin()])  # realized
    profiles.append(UniversitySummary(
        key=ctx_2014.key, university=f"univ-{i:02d}", admission_score=line,
        highest_score=min(line + 28, 700), enrollment=80 + 5 * i,
        location=towns[i % len(towns)], majors=frozenset(majors[i % len(majors)]),
    ))

inputs = PredictionInput(target=ctx_2015, srt_target=srt_2015,
                         bases=(BaseYear(ctx_2014, srt_2014, tuple(profiles)),))

student = StudentPreference(
    gaokao_score=615, exam_type=ExamType.LIKE, tier=1,
    preferred_majors=frozenset({"cs"}),
    disliked_locations=frozenset({"xian"}),
)

for score in (615, 630):
    result = recommend(student if score == 615 else
                       StudentPreference(score, ExamType.LIKE, 1,
                                         preferred_majors=frozenset({"cs"}),
                                         disliked_locations=frozenset({"xian"})),
                       inputs, profiles, ModelId.WSM, slot_count=3, pad=5)
    print(f"student score {score}:")
    for label in result.labels:
        names = ", ".join(i.university for i in result.placed(label)) or "-"
        print(f"  [{label}] {names}")
    print()

print("Raising the score moved universities from the safe end toward the")
print("reach end; a disliked location never appears in any list.")
