"""Tests for report emission."""

import json

import pytest

from squaregroups.checks import CheckReport
from squaregroups.report import REPORT_SCHEMA, emit_report, exit_status


@pytest.fixture
def mixed_report():
    report = CheckReport(title="mixed")
    report.add("z.last", True)
    report.add("a.first", False, witness="x", detail="broken")
    report.skip("m.middle", "too large")
    report.summary["rank"] = "1"
    return report


class TestTextOutput:
    """Tests for the text format."""

    def test_empty_report_is_header_only(self):
        """A report without checks prints only its header."""
        assert emit_report([CheckReport(title="empty")]) == "== empty ==\n"

    def test_lines_are_sorted(self, mixed_report):
        """Results appear in name order with their marks."""
        lines = emit_report(mixed_report).splitlines()
        assert lines[0] == "== mixed =="
        assert lines[1] == "  rank: 1"
        assert lines[2] == "  [FAIL] a.first (x) - broken"
        assert lines[3] == "  [SKIP] m.middle (too large)"
        assert lines[4] == "  [PASS] z.last"
        assert lines[5] == "  3 checks, 1 failed, 1 skipped"

    def test_no_reports(self):
        """No reports render as the empty string."""
        assert emit_report([]) == ""


class TestMachineOutput:
    """Tests for the machine format."""

    def test_schema_and_order(self, mixed_report):
        """The JSON document carries the schema and sorted results."""
        data = json.loads(emit_report([mixed_report], "machine"))
        assert data["schema"] == REPORT_SCHEMA
        assert data["ok"] is False
        names = [r["name"] for r in data["reports"][0]["results"]]
        assert names == ["a.first", "m.middle", "z.last"]

    def test_deterministic(self, mixed_report):
        """The same report renders to the same bytes."""
        assert emit_report([mixed_report], "machine") == emit_report([mixed_report.sorted()], "machine")

    def test_unknown_format(self, mixed_report):
        """Only text and machine formats exist."""
        with pytest.raises(ValueError, match="unknown report format"):
            emit_report([mixed_report], "yaml")


class TestExitStatus:
    """Tests for exit_status."""

    def test_all_pass(self):
        """Passing and skipped checks exit with 0."""
        report = CheckReport()
        report.add("a", True)
        report.skip("b", "later")
        assert exit_status([report]) == 0

    def test_failure(self, mixed_report):
        """Any failure exits with 1."""
        assert exit_status([CheckReport(), mixed_report]) == 1
