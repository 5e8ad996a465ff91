"""Cleaning a university's admit list before trusting its score line.

Policy admissions (minority-nationality programs, rural-talent quotas,
athletes) legally enter below the cutoff line and drag the apparent
minimum admit score far under the real one. The robust median-absolute-
deviation tests catch them without being fooled the way a mean/stddev
rule would be.
"""

import numpy as np

from scoreline import double_mad_filter, single_mad_filter

# A tier-1 university whose real score line is 612, plus two policy admits
# far below it, plus one top scorer who chose it over a higher-ranked school.
rng = np.random.default_rng(3)
regular = np.round(rng.normal(622, 7, 80)).astype(int).clip(612, 660).tolist()
admits = sorted([545, 562] + regular + [699])

for name, filt in (("single MAD", single_mad_filter), ("double MAD", double_mad_filter)):
    report = filt(admits)
    print(f"{name}: kept {len(report.kept)}/{len(admits)}")
    for score, stat in report.removed:
        print(f"  removed {score}  (statistic {stat:.2f} >= 2.24)")
    print(f"  score line: raw {min(admits)} -> filtered {report.kept[0]}\n")

# The double test scales each side separately, so a heavy low tail cannot
# mask a high outlier. Compare on a deliberately lopsided list:
lopsided = [540, 548, 300, 555, 560, 565, 570, 640]
single = single_mad_filter(lopsided)
double = double_mad_filter(lopsided)
print("lopsided list:", lopsided)
print(f"  single test removes {single.removed_scores}")
print(f"  double test removes {double.removed_scores}")
