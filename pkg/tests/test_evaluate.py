import pytest

from datagen import write_dataset
from scoreline.domain import ModelId
from scoreline.evaluate import (
    EvaluationError,
    accuracy_report,
    format_pct,
    pd_accuracy,
    render_csv,
    render_text,
)
from scoreline.ingest import load_snapshot


GOLDEN_PREDICTIONS = {
    "u0": 600, "u1": 612, "u2": 587, "u3": 655, "u4": 630,
    "u5": 598, "u6": 641, "u7": 577, "u8": 619, "u9": 604,
}
GOLDEN_TRUTHS = {
    "u0": 603, "u1": 612, "u2": 580, "u3": 650, "u4": 636,
    "u5": 597, "u6": 649, "u7": 577, "u8": 611, "u9": 600,
}
# absolute errors by hand: u0 3, u1 0, u2 7, u3 5, u4 6, u5 1, u6 8, u7 0, u8 8, u9 4
GOLDEN_HITS = {0: 2, 3: 4, 5: 6, 6: 7, 7: 8, 8: 10}


class TestPdAccuracy:
    @pytest.mark.parametrize("pd,expected", sorted(GOLDEN_HITS.items()))
    def test_golden_fixture_counts(self, pd, expected):
        cell = pd_accuracy(GOLDEN_PREDICTIONS, GOLDEN_TRUTHS, pd)
        assert cell.numerator == expected
        assert cell.denominator == 10
        assert cell.percentage == pytest.approx(10.0 * expected)

    def test_exact_prediction_is_full_marks_at_zero(self):
        cell = pd_accuracy(GOLDEN_TRUTHS, GOLDEN_TRUTHS, 0)
        assert cell.percentage == 100.0

    def test_monotone_in_tolerance(self):
        pcts = [pd_accuracy(GOLDEN_PREDICTIONS, GOLDEN_TRUTHS, pd).percentage
                for pd in range(0, 12)]
        assert all(a <= b for a, b in zip(pcts, pcts[1:]))

    def test_missing_truths_counted_as_coverage_drop(self):
        preds = dict(GOLDEN_PREDICTIONS, unknown=640)
        cell = pd_accuracy(preds, GOLDEN_TRUTHS, 5)
        assert cell.denominator == 10
        assert cell.coverage_dropped == 1

    def test_disjoint_sets_rejected(self):
        with pytest.raises(EvaluationError, match="share no universities"):
            pd_accuracy({"a": 1}, {"b": 2}, 5)

    def test_negative_tolerance_rejected(self):
        with pytest.raises(EvaluationError):
            pd_accuracy(GOLDEN_PREDICTIONS, GOLDEN_TRUTHS, -1)


def test_format_pct_rounds_half_away():
    assert format_pct(86.25) == "86.3"
    assert format_pct(90.625) == "90.6"
    assert format_pct(100.0) == "100.0"


@pytest.fixture(scope="module")
def snapshot(tmp_path_factory):
    root = write_dataset(tmp_path_factory.mktemp("data") / "d")
    return load_snapshot(root)


class TestAccuracyReport:
    def test_grid_cardinality(self, snapshot):
        report = accuracy_report(snapshot, 2015, (2013, 2014), pd_values=(5, 6, 7))
        assert report.groups == ("LK1", "WK1", "LK2", "WK2")
        assert len(report.cells) == 5 * 3 * 4  # models x pd x groups

    def test_report_layout_matches_expected_shape(self, snapshot):
        report = accuracy_report(snapshot, 2015, (2013, 2014), pd_values=(5, 6, 7))
        text = render_text(report)
        lines = text.splitlines()
        assert lines[0].split() == ["Model", "PD", "LK1", "(%)", "WK1", "(%)", "LK2", "(%)", "WK2", "(%)"]
        model_rows = [l.split()[0] for l in lines if l and l[0].isalpha() and not l.startswith(("Model", "note"))]
        assert model_rows == ["AASM", "AADM", "BRM", "WSM", "WPM"] * 3

    def test_rows_are_machine_readable(self, snapshot):
        report = accuracy_report(snapshot, 2015, (2013, 2014), pd_values=(5,))
        csv_text = render_csv(report)
        header, *rows = csv_text.strip().splitlines()
        assert header == "model,pd,group,percentage,numerator,denominator"
        assert len(rows) == len(report.cells)
        for row in rows:
            model, pd, group, pct, num, den = row.split(",")
            assert model in ("aasm", "aadm", "brm", "wsm", "wpm")
            assert int(num) <= int(den)

    def test_monotone_in_pd_for_every_cell(self, snapshot):
        report = accuracy_report(snapshot, 2015, (2013, 2014), pd_values=(3, 5, 7))
        for model in report.models:
            for group in report.groups:
                pcts = [report.cell(model, pd, group).percentage
                        for pd in report.pd_values]
                assert all(a <= b + 1e-12 for a, b in zip(pcts, pcts[1:]))

    def test_single_base_year_drops_baselines(self, snapshot):
        report = accuracy_report(snapshot, 2015, (2014,), pd_values=(5,))
        assert ModelId.AASM not in report.models
        assert ModelId.AADM not in report.models
        assert any("aasm" in d for d in report.diagnostics)

    def test_rank_models_beat_baselines_on_sample_data(self, snapshot):
        report = accuracy_report(snapshot, 2015, (2013, 2014), pd_values=(7,))
        for group in report.groups:
            brm = report.cell(ModelId.BRM, 7, group).percentage
            aasm = report.cell(ModelId.AASM, 7, group).percentage
            assert brm >= aasm

    def test_workers_do_not_change_the_report(self, snapshot):
        a = accuracy_report(snapshot, 2015, (2013, 2014), pd_values=(5, 6, 7), workers=1)
        b = accuracy_report(snapshot, 2015, (2013, 2014), pd_values=(5, 6, 7), workers=4)
        assert render_text(a) == render_text(b)
        assert render_csv(a) == render_csv(b)
        assert a == b

    def test_unknown_target_year_rejected(self, snapshot):
        with pytest.raises(EvaluationError, match="no cohorts"):
            accuracy_report(snapshot, 2030, (2014,))

    def test_pd_defaults_follow_scale(self, snapshot):
        report = accuracy_report(snapshot, 2015, (2013, 2014))
        assert report.pd_values == (5, 6, 7)  # sample data is on the 750 scale
