"""Tests for check reports."""

import pytest

from squaregroups.checks import CheckReport, CheckStatus, combine
from squaregroups.utils import ValidationError


class TestCheckReport:
    """Tests for CheckReport."""

    def test_add_returns_outcome(self):
        """add() returns whether the check passed."""
        report = CheckReport(title="t")
        assert report.add("a.pass", True) is True
        assert report.add("a.fail", False, witness=(1, 2)) is False
        assert not report.ok
        assert report.failures[0].witness == "(1, 2)"

    def test_passing_checks_drop_witness(self):
        """Witnesses are only kept for failures."""
        report = CheckReport()
        report.add("a", True, witness="ignored")
        assert report.results[0].witness is None

    def test_skips_do_not_fail(self):
        """Skipped checks leave the report ok."""
        report = CheckReport()
        report.skip("slow", "too large")
        assert report.ok
        assert report.skipped[0].status is CheckStatus.SKIPPED

    def test_raise_for_failure(self):
        """The first failure is raised with its name and witness."""
        report = CheckReport(title="axioms")
        report.add("sg.php", True)
        report.add("sg.cross_p", False, witness="(P(ee0) | 1)")
        with pytest.raises(ValidationError, match="axioms: sg.cross_p failed") as excinfo:
            report.raise_for_failure()
        assert excinfo.value.check == "sg.cross_p"
        assert excinfo.value.witness == "(P(ee0) | 1)"

    def test_merge_with_prefix(self):
        """merge() prefixes result names and summary keys."""
        inner = CheckReport()
        inner.add("x", True)
        inner.summary["rank"] = "2"
        outer = CheckReport().merge(inner, prefix="sub.")
        assert outer.results[0].name == "sub.x"
        assert outer.summary == {"sub.rank": "2"}

    def test_sorted_is_deterministic(self):
        """sorted() orders results and summary by name."""
        report = CheckReport()
        report.add("b", True)
        report.add("a", True)
        report.summary["z"] = "1"
        report.summary["y"] = "2"
        ordered = report.sorted()
        assert [r.name for r in ordered.results] == ["a", "b"]
        assert list(ordered.summary) == ["y", "z"]

    def test_to_dict(self):
        """Dictionaries carry the status values."""
        report = CheckReport(title="t")
        report.add("a", False, "w", "d")
        data = report.to_dict()
        assert data["ok"] is False
        assert data["results"][0] == {"name": "a", "status": "fail", "witness": "w", "detail": "d"}

    def test_combine(self):
        """combine() concatenates reports under one title."""
        first, second = CheckReport(), CheckReport()
        first.add("a", True)
        second.add("b", False)
        combined = combine("both", [first, second])
        assert combined.title == "both"
        assert [r.name for r in combined.results] == ["a", "b"]
        assert not combined
