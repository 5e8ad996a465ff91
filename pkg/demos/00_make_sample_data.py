"""Write a small self-consistent sample dataset into ./sample_data/.

Twelve universities per (exam, tier) group over 2013-2015, with every
cohort's student body formed as the union of the university admit lists.
The CLI walkthrough in the README runs against this directory.
"""

import numpy as np

from scoreline.domain import AdmissionRecord, CohortContext, CohortKey, ExamType
from scoreline.ingest import write_contexts, write_enrollment

GROUPS = ((ExamType.LIKE, 1), (ExamType.WENKE, 1), (ExamType.LIKE, 2), (ExamType.WENKE, 2))
YEARS = (2013, 2014, 2015)
MAJORS = ("cs", "math", "physics", "economics", "history", "literature")


def main(out_dir="sample_data", seed=11, par="henan"):
    rng = np.random.default_rng(seed)
    records, contexts = [], []
    for exam, tier in GROUPS:
        for year in YEARS:
            key = CohortKey(year, par, exam, tier)
            top = 660 if tier == 1 else 600
            lines = np.linspace(top, top - 88, 12)
            lines += rng.integers(-3, 4, size=12)
            lines += {2013: 0, 2014: 3, 2015: 8}[year]
            lines += 0 if exam is ExamType.LIKE else -6
            lines = np.round(lines).astype(int)
            cohort_scores = []
            for i, line in enumerate(lines):
                university = f"{exam.label.lower()}{tier}-univ-{i:02d}"
                n = int(rng.integers(60, 140))
                admits = (line + rng.triangular(0, 0, 28, size=n)).astype(int)
                admits[0] = line
                for j, score in enumerate(admits):
                    records.append(AdmissionRecord(key, university,
                                                   MAJORS[(i + j) % len(MAJORS)],
                                                   int(score)))
                cohort_scores.extend(int(s) for s in admits)
            contexts.append(CohortContext(
                year=year, par=par, exam_type=exam, tier=tier,
                ascl=int(min(lines)), highest=int(max(cohort_scores)),
                admitted_total=len(cohort_scores), scale_max=750,
            ))

    from pathlib import Path
    out = Path(out_dir)
    out.mkdir(exist_ok=True)
    write_contexts(contexts, out / "contexts.csv")
    write_enrollment(records, out / "enrollment.csv")
    print(f"wrote {len(contexts)} cohorts, {len(records)} enrollment rows -> {out}/")
    print("try:  scoreline evaluate --data sample_data --target 2015 "
          "--base-years 2013,2014 --pd 5,6,7")


if __name__ == "__main__":
    main()
