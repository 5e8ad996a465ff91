import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scoreline.domain import (
    CohortContext,
    ExamType,
    ModelId,
    Prediction,
    PredictionInputError,
    UniversitySummary,
)
from scoreline.models import (
    BaseYear,
    PredictionInput,
    clamp_prediction,
    ensemble_mean,
    predict_aadm,
    predict_aasm,
    predict_brm,
    predict_wpm,
    predict_wsm,
    run_model,
    sort_for_wsm,
    wpm_bias,
    wsm_plan,
)
from scoreline.srt import build_srt


def ctx(year=2014, ascl=680, highest=700, n=4, **kw):
    return CohortContext(year=year, par="henan", exam_type=ExamType.LIKE, tier=1,
                         ascl=ascl, highest=highest, admitted_total=n, scale_max=750, **kw)


@pytest.fixture
def base_table():
    return build_srt(ctx(), [700, 690, 690, 680])


@pytest.fixture
def target_table():
    return build_srt(ctx(year=2015, ascl=688, highest=705), [705, 698, 698, 688])


class TestBrm:
    def test_identity_on_same_table(self, base_table):
        for a in (700, 690, 680):  # realized admission scores
            assert predict_brm(a, base_table, base_table).predicted_score == a

    def test_hand_traced_cross_table(self, base_table, target_table):
        assert predict_brm(690, base_table, target_table).predicted_score == 698
        assert predict_brm(680, base_table, target_table).predicted_score == 688

    def test_base_below_table_clamps_to_ascl(self, base_table, target_table):
        pred = predict_brm(640, base_table, target_table)
        assert "clamped-to-ascl" in pred.flags
        assert pred.predicted_score == 688  # rank at the cutoff line carries over

    def test_rank_beyond_target_flags(self, base_table):
        short_target = build_srt(ctx(year=2015, ascl=698, highest=705, n=2), [705, 698])
        pred = predict_brm(680, base_table, short_target)
        assert "rank-beyond-table" in pred.flags
        assert pred.predicted_score == short_target.low


class TestWsmPlan:
    def test_worked_example_small(self):
        plan = wsm_plan(6, 523, 520)  # W = 3
        assert plan.interval_count == 2
        assert plan.sizes == (4, 2)
        assert plan.bounds == ((1, 4), (5, 6))
        assert plan.sign == 1

    def test_worked_example_large(self):
        plan = wsm_plan(100, 530, 520)  # W = 10
        assert plan.interval_count == 4
        assert plan.sizes == (40, 30, 20, 10)

    def test_zero_weight_empty_plan(self):
        plan = wsm_plan(5, 520, 520)
        assert plan.interval_count == 0
        assert plan.sizes == ()
        assert all(plan.bias_at(p) == 0 for p in range(1, 6))

    def test_sign_tracks_cutoff_direction(self):
        assert wsm_plan(5, 510, 520).sign == -1
        assert wsm_plan(5, 520, 510).sign == 1

    @given(n=st.integers(min_value=1, max_value=1000),
           w=st.integers(min_value=1, max_value=100))
    @settings(max_examples=300, deadline=None)
    def test_plan_properties(self, n, w):
        plan = wsm_plan(n, 500 + w, 500)
        d = plan.interval_count
        assert d * (d + 1) // 2 >= w
        assert (d - 1) * d // 2 < w
        assert sum(plan.sizes) == n
        assert plan.bounds[0][0] == 1
        assert plan.bounds[-1][1] == n
        position = 1
        for start, end in plan.bounds:
            assert start == position
            position = end + 1


class TestWsmPredictions:
    def make_summaries(self, bases, key):
        return [
            UniversitySummary(key=key, university=f"u{i}", admission_score=a,
                              highest_score=a + 5, enrollment=100)
            for i, a in enumerate(bases)
        ]

    def test_interval_biases_applied(self, base_table):
        # W = 3 over 6 universities: positions 1-4 get +0, positions 5-6 get +1
        target_ctx = ctx(year=2015, ascl=683, highest=705, n=7)
        target = build_srt(target_ctx, [705, 698, 698, 688, 686, 684, 683])
        summaries = self.make_summaries([700, 690, 685, 683, 681, 680], base_table.context.key)
        preds = {p.university: p for p in predict_wsm(summaries, base_table, target)}
        brm = {
            s.university: predict_brm(s.admission_score, base_table, target).predicted_score
            for s in summaries
        }
        deltas = [preds[f"u{i}"].predicted_score - brm[f"u{i}"] for i in range(6)]
        assert deltas == [0, 0, 0, 0, 1, 1]

    def test_zero_weight_equals_brm(self, base_table):
        target = build_srt(ctx(year=2015), [700, 695, 690, 680])
        summaries = self.make_summaries([700, 690, 680], base_table.context.key)
        wsm = predict_wsm(summaries, base_table, target)
        for p in wsm:
            brm = predict_brm(
                next(s.admission_score for s in summaries if s.university == p.university),
                base_table, target,
            )
            assert p.predicted_score == brm.predicted_score

    def test_falling_cutoff_subtracts(self, base_table):
        target_ctx = ctx(year=2015, ascl=677, highest=705, n=7)
        target = build_srt(target_ctx, [705, 698, 698, 688, 686, 684, 677])
        summaries = self.make_summaries([700, 690, 685, 683, 681, 680], base_table.context.key)
        preds = {p.university: p for p in predict_wsm(summaries, base_table, target)}
        brm = {
            s.university: predict_brm(s.admission_score, base_table, target).predicted_score
            for s in summaries
        }
        deltas = [preds[f"u{i}"].predicted_score - brm[f"u{i}"] for i in range(6)]
        assert deltas == [0, 0, 0, 0, -1, -1]

    def test_tie_break_enrollment_then_name(self):
        key = ctx().key
        a = UniversitySummary(key=key, university="aaa", admission_score=650,
                              highest_score=660, enrollment=50)
        b = UniversitySummary(key=key, university="bbb", admission_score=650,
                              highest_score=660, enrollment=90)
        c = UniversitySummary(key=key, university="ccc", admission_score=655,
                              highest_score=660, enrollment=10)
        assert [s.university for s in sort_for_wsm([a, b, c])] == ["ccc", "bbb", "aaa"]


class TestWpm:
    def test_bias_examples(self):
        assert wpm_bias(25, 10) == 2
        assert wpm_bias(7, 10) == 0
        assert wpm_bias(10, 10) == 1

    @given(d=st.integers(min_value=0, max_value=500),
           delta=st.integers(min_value=1, max_value=50))
    @settings(max_examples=300, deadline=None)
    def test_bias_inequality(self, d, delta):
        j = wpm_bias(d, delta)
        if d < delta:
            assert j == 0
        else:
            assert j >= 1
            assert j * delta <= d < (j + 1) * delta
        assert j <= -(-d // delta)  # j never exceeds ceil(d / delta)

    def test_prediction_adds_density_bias(self):
        # span 20, 42 students -> per-point average ceil(42/20) = 3
        scores = [700] + [690] * 5 + [685] * 30 + [680] * 6
        base = build_srt(ctx(n=len(scores)), scores)
        target = build_srt(ctx(year=2015, ascl=682, n=len(scores)), scores)
        key = base.context.key
        summary = UniversitySummary(key=key, university="dense", admission_score=685,
                                    highest_score=700, enrollment=30)
        pred = predict_wpm(summary, base, target)
        brm = predict_brm(685, base, target).predicted_score
        assert pred.predicted_score == brm + 30 // 3

    def test_degenerate_span_rejected(self):
        flat_ctx = ctx(ascl=700, highest=700, n=3)
        flat = build_srt(flat_ctx, [700, 700, 700])
        summary = UniversitySummary(key=flat_ctx.key, university="u", admission_score=700,
                                    highest_score=700, enrollment=3)
        with pytest.raises(PredictionInputError, match="degenerate"):
            predict_wpm(summary, flat, flat)


class TestBaselines:
    def test_aasm_arithmetic(self):
        assert predict_aasm(600, 610, "u", (2014, 2013)).predicted_score == 605
        assert predict_aasm(600, 600, "u", (2014, 2013)).predicted_score == 600
        assert predict_aasm(601, 600, "u", (2014, 2013)).predicted_score == 601

    def test_aasm_requires_both_years(self):
        with pytest.raises(PredictionInputError):
            predict_aasm(600, None, "u", (2014,))

    def test_aadm_arithmetic(self):
        assert predict_aadm(600, 610, 520, 510, 530, "u", (2014, 2013)).predicted_score == 605
        assert predict_aadm(580, 590, 500, 500, 500, "u", (2014, 2013)).predicted_score == 585

    def test_aadm_equals_aasm_when_cutoffs_equal(self):
        aasm = predict_aasm(612, 618, "u", (2014, 2013)).predicted_score
        aadm = predict_aadm(612, 618, 520, 520, 520, "u", (2014, 2013)).predicted_score
        assert aadm == aasm

    @given(a1=st.integers(500, 700), a2=st.integers(500, 700),
           lt=st.integers(450, 550), l1=st.integers(450, 550),
           l2=st.integers(450, 550), c=st.integers(-30, 30))
    @settings(max_examples=200, deadline=None)
    def test_aadm_shift_equivariance(self, a1, a2, lt, l1, l2, c):
        base = predict_aadm(a1, a2, lt, l1, l2, "u", (2014, 2013)).predicted_score
        shifted = predict_aadm(a1, a2, lt + c, l1, l2, "u", (2014, 2013)).predicted_score
        assert shifted == base + c


class TestEnsemble:
    def test_mean_fixtures(self):
        p = lambda score, year: Prediction("u", ModelId.BRM, score, (year,))
        assert ensemble_mean([p(698, 2014), p(702, 2013)]).predicted_score == 700
        assert ensemble_mean([p(697, 2014), p(702, 2013)]).predicted_score == 700
        assert ensemble_mean([p(698, 2014)]).predicted_score == 698

    def test_base_years_union_and_flags(self):
        p = lambda score, year: Prediction("u", ModelId.BRM, score, (year,))
        combined = ensemble_mean([p(698, 2014), p(702, 2013)])
        assert combined.base_years == (2013, 2014)
        assert "two-base-mean" in combined.flags
        assert combined.model is ModelId.BRM

    def test_mixed_families_marked_ensemble(self):
        a = Prediction("u", ModelId.BRM, 700, (2014,))
        b = Prediction("u", ModelId.WSM, 702, (2014,))
        assert ensemble_mean([a, b]).model is ModelId.ENSEMBLE

    def test_mixed_universities_rejected(self):
        a = Prediction("u1", ModelId.BRM, 700, (2014,))
        b = Prediction("u2", ModelId.BRM, 702, (2014,))
        with pytest.raises(PredictionInputError):
            ensemble_mean([a, b])

    def test_empty_rejected(self):
        with pytest.raises(PredictionInputError):
            ensemble_mean([])


class TestClamp:
    def test_clamps_to_guard_range(self):
        target = ctx(year=2015, ascl=500, highest=700)
        low = clamp_prediction(Prediction("u", ModelId.BRM, 480, (2014,)), target, guard=10)
        assert low.predicted_score == 490 and "clamped" in low.flags
        high = clamp_prediction(Prediction("u", ModelId.BRM, 710, (2014,)), target, guard=10)
        assert high.predicted_score == 700 and "clamped" in high.flags
        mid = clamp_prediction(Prediction("u", ModelId.BRM, 600, (2014,)), target, guard=10)
        assert mid.flags == frozenset()


class TestRunModel:
    def make_inputs(self, with_second_base=True):
        rng = np.random.default_rng(3)
        cohorts = {}
        for year, lo in ((2013, 520), (2014, 520), (2015, 528)):
            scores = np.clip(rng.normal(590, 35, 3000).astype(int), lo, 700)
            scores[0] = 700
            scores[-1] = lo
            cohorts[year] = (ctx(year=year, ascl=lo, highest=700, n=3000),
                             scores.tolist())
        tables = {y: build_srt(c, s) for y, (c, s) in cohorts.items()}
        bases = []
        years = (2014, 2013) if with_second_base else (2014,)
        for year in years:
            cohort_ctx, scores = cohorts[year]
            lines = np.quantile(scores, [0.1, 0.25, 0.4, 0.55, 0.7, 0.85]).astype(int)
            summaries = tuple(
                UniversitySummary(key=cohort_ctx.key, university=f"u{i}",
                                  admission_score=line, highest_score=min(line + 25, 700),
                                  enrollment=80)
                for i, line in enumerate(lines)
            )
            bases.append(BaseYear(cohorts[year][0], tables[year], summaries))
        return PredictionInput(target=cohorts[2015][0], srt_target=tables[2015],
                               bases=tuple(bases))

    def test_every_model_covers_every_university(self):
        inputs = self.make_inputs()
        for model in (ModelId.BRM, ModelId.WSM, ModelId.WPM, ModelId.AASM, ModelId.AADM):
            preds = run_model(inputs, model)
            assert len(preds) == 6
            assert [p.university for p in preds] == sorted(p.university for p in preds)
            for p in preds:
                assert inputs.target.ascl - 10 <= p.predicted_score <= inputs.target.highest

    def test_two_base_predictions_are_ensembled(self):
        inputs = self.make_inputs()
        preds = run_model(inputs, ModelId.BRM)
        assert all(p.base_years == (2013, 2014) for p in preds)
        assert all("two-base-mean" in p.flags for p in preds)

    def test_baselines_require_two_years(self):
        inputs = self.make_inputs(with_second_base=False)
        with pytest.raises(PredictionInputError, match="two base years"):
            run_model(inputs, ModelId.AASM)

    def test_university_missing_one_base_year_flagged(self):
        inputs = self.make_inputs()
        trimmed = dataclasses.replace(inputs.bases[1],
                                      summaries=inputs.bases[1].summaries[:-1])
        inputs = dataclasses.replace(inputs, bases=(inputs.bases[0], trimmed))
        preds = {p.university: p for p in run_model(inputs, ModelId.BRM)}
        assert "single-base" in preds["u5"].flags
        assert all("single-base" not in preds[f"u{i}"].flags for i in range(5))

    def test_mismatched_cohorts_rejected(self):
        inputs = self.make_inputs()
        alien = dataclasses.replace(inputs.bases[0].context, par="hebei")
        with pytest.raises(PredictionInputError, match="does not match"):
            PredictionInput(
                target=inputs.target,
                srt_target=inputs.srt_target,
                bases=(dataclasses.replace(inputs.bases[0], context=alien),),
            )

    def test_determinism(self):
        a = run_model(self.make_inputs(), ModelId.WPM)
        b = run_model(self.make_inputs(), ModelId.WPM)
        assert a == b
