"""Tests for JSON, CSV and plain rendering."""

import json

import pytest

from src.core.golden import phi_pow
from src.models import MixingReport, MixingRow, TowerLevelModel, distribution_model, golden
from src.services.mudist import compute_mu
from src.utils.rendering import (
    MU_CSV_HEADER,
    format_float,
    mixing_csv_rows,
    mixing_plain,
    mu_csv_rows,
    mu_plain,
    render,
    render_csv,
    render_json,
)


def _row(passed=True, bound=0.5):
    return MixingRow(kind="phi", k=2, p=1, estimate=0.123456789012345, stderr=0.001,
                     theorem_bound=bound, passed=passed, trivially_passed=bound >= 1,
                     n_samples=10_000, event_family="A: x; B: y")


class TestFloats:
    """Tests for float formatting."""

    def test_twelve_digits(self):
        """Floats keep 12 significant digits."""
        assert format_float(phi_pow(-3).to_float()) == "0.2360679775"
        assert format_float(1 / 3) == "0.333333333333"
        assert format_float(1.0) == "1"

    def test_explicit_digits(self):
        """Digits can be overridden."""
        assert format_float(3.14159, 3) == "3.14"


class TestRenderers:
    """Tests for the three output formats."""

    def test_json_rounds_and_aliases(self):
        """JSON uses field aliases and rounds floats."""
        data = json.loads(render_json(MixingReport(rows=[_row()])))
        row = data["rows"][0]
        assert row["pass"] is True
        assert row["estimate"] == 0.123456789012

    def test_json_drops_none(self):
        """Unset optional fields are omitted."""
        level = TowerLevelModel(index=0, integer=0, word="00", mass=golden(phi_pow(-2)))
        data = json.loads(render_json(level))
        assert "parent_tower" not in data
        assert data["in_niz"] is False

    def test_csv_cells(self):
        """Booleans, floats and None render as plain cells."""
        text = render_csv(("a", "b", "c", "d"), [(True, 0.5, None, 3)])
        assert text == "a,b,c,d\ntrue,0.5,,3"

    def test_unknown_format(self):
        """Unknown formats are rejected."""
        with pytest.raises(ValueError):
            render("xml", MixingReport(rows=[]), (), [], "")

    def test_deterministic(self):
        """Same model, same bytes."""
        model = distribution_model(compute_mu(7))
        assert render_json(model) == render_json(distribution_model(compute_mu(7)))


class TestDomainRows:
    """Tests for distribution and mixing rows."""

    def test_mu_rows(self):
        """One CSV row per d with exact parts."""
        model = distribution_model(compute_mu(4))
        rows = mu_csv_rows(model)
        assert len(MU_CSV_HEADER) == 4
        assert [r[0] for r in rows] == [-1, 0, 1, 2]
        assert rows[2][1:3] == ["-3", "2"]

    def test_mu_plain(self):
        """Plain output lists the masses and checksums."""
        text = mu_plain(distribution_model(compute_mu(4)))
        assert text.splitlines()[0].startswith("mu^(4)  l=4")
        assert text.splitlines()[-1] == "total mass 1, mean 0"

    def test_mixing_rows(self):
        """CSV columns follow the header order."""
        assert mixing_csv_rows([_row()]) == [[2, 1, 0.123456789012345, 0.001, 0.5, True]]

    def test_mixing_plain(self):
        """Plain verdicts mark failures and trivial bounds."""
        assert mixing_plain([_row(passed=False)]).endswith("FAIL")
        assert mixing_plain([_row(bound=11.0)]).endswith("pass (bound >= 1)")
