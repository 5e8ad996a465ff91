"""Deterministic sample-dataset builder for CLI, service and report tests.

The cohort is the union of per-university admit lists, so score-ranking
tables, summaries and records are mutually consistent by construction.
Everything hangs off a seeded generator: same seed, same files, same bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from scoreline import ExamType
from scoreline.domain import CohortContext, CohortKey
from scoreline.ingest import write_contexts, write_enrollment
from scoreline.domain import AdmissionRecord

GROUPS = (
    (ExamType.LIKE, 1),
    (ExamType.WENKE, 1),
    (ExamType.LIKE, 2),
    (ExamType.WENKE, 2),
)
YEARS = (2013, 2014, 2015)
MAJORS = ("cs", "math", "physics", "economics", "history", "literature")
LOCATIONS = ("beijing", "shanghai", "wuhan", "xian", "chengdu", "nanjing")


def _university_lines(rng, exam, tier, year):
    """Admission score line per university; tier-2 sits lower and drifts more."""
    n_univ = 12
    top = 660 if tier == 1 else 600
    base = np.linspace(top, top - 88, n_univ)
    wobble = rng.integers(-3, 4, size=n_univ)
    year_shift = {2013: 0, 2014: 3, 2015: 8}[year]  # cutoff climbs over the years
    exam_shift = 0 if exam is ExamType.LIKE else -6
    return np.round(base + wobble + year_shift + exam_shift).astype(int)


def build_records(seed=11, par="henan"):
    """All enrollment records plus the context list they imply."""
    rng = np.random.default_rng(seed)
    records: list[AdmissionRecord] = []
    contexts: list[CohortContext] = []
    for exam, tier in GROUPS:
        for year in YEARS:
            key = CohortKey(year, par, exam, tier)
            lines = _university_lines(rng, exam, tier, year)
            all_scores: list[int] = []
            for i, line in enumerate(lines):
                university = f"{exam.label.lower()}{tier}-univ-{i:02d}"
                n_students = int(rng.integers(60, 140))
                spread = rng.triangular(0, 0, 28, size=n_students)
                scores = (line + spread).astype(int)
                scores[0] = line  # the score line itself is always realized
                for j, score in enumerate(scores):
                    records.append(
                        AdmissionRecord(
                            key=key,
                            university=university,
                            major=MAJORS[(i + j) % len(MAJORS)],
                            score=int(score),
                        )
                    )
                all_scores.extend(int(s) for s in scores)
            ascl = int(min(lines))
            contexts.append(
                CohortContext(
                    year=year,
                    par=par,
                    exam_type=exam,
                    tier=tier,
                    ascl=ascl,
                    highest=int(max(all_scores)),
                    admitted_total=len(all_scores),
                    scale_max=750,
                )
            )
    return contexts, records


def write_dataset(root, seed=11, par="henan") -> Path:
    """Write contexts.csv and enrollment.csv; returns the directory."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    contexts, records = build_records(seed, par)
    write_contexts(contexts, root / "contexts.csv")
    write_enrollment(records, root / "enrollment.csv")
    return root
