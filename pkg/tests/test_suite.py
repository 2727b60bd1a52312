"""Tests for the acceptance suite runner."""

import pytest

from squaregroups.checks import CheckReport
from squaregroups.report import emit_report
from squaregroups.suite import (
    AREAS,
    SuiteCase,
    cyclic_sequence,
    run_case,
    run_suite,
    suite_cases,
)
from squaregroups.utils import UnsupportedInstanceError


class TestSuiteCases:
    """Tests for case selection."""

    def test_every_area_has_cases(self, sample_verification_config):
        """Each area contributes at least one case."""
        for area in AREAS:
            assert suite_cases([area], sample_verification_config), area

    def test_case_names_unique(self):
        """Case names identify cases."""
        names = [c.name for c in suite_cases()]
        assert len(names) == len(set(names))

    def test_unknown_area(self):
        """Unknown areas are rejected."""
        with pytest.raises(ValueError, match="unknown suite area"):
            suite_cases(["everything"])

    def test_cyclic_sequence(self):
        """Z^(x) --3--> Z^(x) --> (Z/3)^(x)."""
        i, p = cyclic_sequence(3)
        assert i.target is p.source
        assert p.target.e.order() == 3


class TestRunCase:
    """Tests for run_case."""

    def test_title_is_case_name(self):
        """The report is retitled with the case name."""
        report = run_case(SuiteCase("demo.ok", lambda: CheckReport(title="inner")))
        assert report.title == "demo.ok"
        assert report.ok

    def test_errors_become_failures(self):
        """Library errors are recorded as a failed check."""
        def boom():
            raise UnsupportedInstanceError("too big")

        report = run_case(SuiteCase("demo.error", boom))
        assert not report.ok
        assert report.failures[0].name == "error"
        assert "UnsupportedInstanceError: too big" in report.failures[0].witness


class TestRunSuite:
    """Tests for run_suite."""

    def test_bad_thread_count(self):
        """At least one worker is needed."""
        with pytest.raises(ValueError, match="threads must be at least 1"):
            run_suite(threads=0)

    def test_small_areas(self, sample_verification_config):
        """The ring and hom areas pass and come back sorted."""
        reports = run_suite(threads=2, areas=["rings", "homs"], config=sample_verification_config)
        titles = [r.title for r in reports]
        assert titles == sorted(titles)
        assert "rings.psi_two" in titles
        assert all(r.ok for r in reports), [r.title for r in reports if not r.ok]

    def test_homotopy_area(self):
        """The homotopy values case passes."""
        reports = run_suite(areas=["homotopy"])
        values = next(r for r in reports if r.title == "homotopy.values")
        assert values.ok

    def test_threads_match_single_worker(self):
        """Coherence reports are byte-identical for one and four workers."""
        single = run_suite(threads=1, areas=["coherence"])
        pooled = run_suite(threads=4, areas=["coherence"])
        assert all(r.ok for r in pooled), [r.title for r in pooled if not r.ok]
        assert emit_report(pooled, "machine") == emit_report(single, "machine")

    @pytest.mark.slow
    def test_full_suite(self):
        """Every area passes."""
        reports = run_suite(threads=4)
        assert all(r.ok for r in reports), [r.title for r in reports if not r.ok]
