import pytest

from capmult.core import EconomyParams
from capmult.dynamics import CobbDouglas
from capmult.predictions import (
    Scenario,
    Sign,
    SignTable,
    TABLE_QUANTITIES,
    check_predictions,
    sign_table,
)

CD = CobbDouglas(1.0, 1.0, 0.5, 0.5)
BASE = EconomyParams(0.5, 0.15, 0.1, 0.05)  # p = R + n, steady-state start


class TestSignTable:
    def test_rate_fall_pattern(self):
        table = sign_table(Scenario.R_FALLS, BASE, CD)
        assert table.entries == {
            "Investment": Sign.PLUS,
            "ShareC": Sign.MINUS,
            "ShareI": Sign.PLUS,
            "GrowthRateInvC": Sign.NA,
            "GrowthRateInvI": Sign.PLUS,
        }

    def test_rate_growth_pattern(self):
        table = sign_table(Scenario.R_GROWS, BASE, CD)
        assert table.entries == {
            "Investment": Sign.MINUS,
            "ShareC": Sign.PLUS,
            "ShareI": Sign.MINUS,
            "GrowthRateInvC": Sign.NA,
            "GrowthRateInvI": Sign.MINUS,
        }

    def test_scenarios_are_antisymmetric(self):
        flip = {Sign.PLUS: Sign.MINUS, Sign.MINUS: Sign.PLUS, Sign.NA: Sign.NA}
        falls = sign_table(Scenario.R_FALLS, BASE, CD)
        grows = sign_table(Scenario.R_GROWS, BASE, CD)
        for quantity in TABLE_QUANTITIES:
            assert grows.entries[quantity] is flip[falls.entries[quantity]]

    def test_covers_all_quantities(self):
        table = sign_table(Scenario.R_FALLS, BASE, CD)
        assert set(table.entries) == set(TABLE_QUANTITIES)

    def test_rejects_zero_step(self):
        with pytest.raises(ValueError, match="degenerate"):
            sign_table(Scenario.R_FALLS, BASE, CD, step=0.0)

    def test_rejects_step_exceeding_rate(self):
        with pytest.raises(ValueError):
            sign_table(Scenario.R_FALLS, BASE, CD, step=0.05)

    def test_deterministic(self):
        first = sign_table(Scenario.R_FALLS, BASE, CD)
        second = sign_table(Scenario.R_FALLS, BASE, CD)
        assert first == second

    def test_share_columns_validated(self):
        with pytest.raises(ValueError):
            SignTable(Scenario.R_FALLS, {
                "Investment": Sign.PLUS,
                "ShareC": Sign.PLUS,
                "ShareI": Sign.PLUS,
                "GrowthRateInvC": Sign.NA,
                "GrowthRateInvI": Sign.NA,
            })
        with pytest.raises(ValueError):
            SignTable(Scenario.R_FALLS, {
                "Investment": Sign.PLUS,
                "ShareC": Sign.NA,
                "ShareI": Sign.PLUS,
                "GrowthRateInvC": Sign.NA,
                "GrowthRateInvI": Sign.NA,
            })


class TestPredictions:
    def test_all_eleven_pass(self):
        report = check_predictions(BASE, CD)
        assert len(report.checks) == 11
        assert [c.number for c in report.checks] == list(range(1, 12))
        for check in report.checks:
            assert check.passed, f"prediction {check.number}: {check.detail}"
        assert report.all_passed

    def test_details_are_informative(self):
        report = check_predictions(BASE, CD)
        for check in report.checks:
            assert check.statement and check.detail

    def test_rejects_nonpositive_perturbation(self):
        with pytest.raises(ValueError):
            check_predictions(BASE, CD, perturbation=0.0)

    def test_deterministic(self):
        first = check_predictions(BASE, CD)
        second = check_predictions(BASE, CD)
        assert first == second
