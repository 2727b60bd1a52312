"""Tests for the command-line interface."""

import json

import pytest

from squaregroups.cli import build_parser, main, run_command
from squaregroups.document import parse_document


def run_main(argv):
    """Run main() and return its exit code."""
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code


class TestParser:
    """Tests for argument parsing."""

    def test_defaults(self):
        """Test default option values."""
        args = build_parser().parse_args(["invariants", "znil"])
        assert args.command == "invariants"
        assert args.format == "text"
        assert args.threads is None
        assert args.document is None

    def test_command_required(self):
        """Test that a subcommand is required."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_coherence_needs_one_law(self):
        """Test that exactly one coherence law is chosen."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["coherence", "--triangle", "znil", "znil", "--unit", "znil"])

    def test_suite_areas(self):
        """Test repeatable suite areas."""
        args = build_parser().parse_args(["suite", "--area", "rings", "--area", "homs"])
        assert args.area == ["rings", "homs"]


class TestMain:
    """Tests for main()."""

    def test_invariants(self, capsys):
        """Test the invariants of Z_nil in text form."""
        assert run_main(["invariants", "znil"]) == 0
        out = capsys.readouterr().out
        assert "== invariants of znil ==" in out
        assert "  T: [[-1]]" in out
        assert "  k.nonzero: True" in out
        assert "  sg_sigma: True" in out

    def test_homotopy_machine(self, capsys):
        """Test machine output of the homotopy groups."""
        assert run_main(["--format", "machine", "homotopy", "znil", "--max", "3"]) == 0
        data = json.loads(capsys.readouterr().out)
        summary = data["reports"][0]["summary"]
        assert [summary[f"pi_{i}"] for i in range(4)] == ["Z", "Z/2", "0", "Z/2"]
        assert data["ok"] is True

    def test_psi(self, capsys):
        """Test psi on Z_nil."""
        assert run_main(["psi", "znil_ring"]) == 0
        out = capsys.readouterr().out
        assert "  psi.codomain: Z/2" in out

    def test_output_file(self, tmp_path, capsys):
        """Test writing the report to a file."""
        target = tmp_path / "report.txt"
        assert run_main(["--output", str(target), "validate", "znil"]) == 0
        assert "== validate znil ==" in target.read_text()
        assert capsys.readouterr().out == ""

    def test_unknown_square(self, capsys):
        """Test the error path for an unknown name."""
        assert run_main(["invariants", "nosuch"]) == 1
        assert "Error: unresolved reference 'nosuch'" in capsys.readouterr().err

    def test_negative_degree(self, capsys):
        """Test rejection of a negative --max."""
        assert run_main(["homotopy", "znil", "--max", "-1"]) == 1
        assert "--max must be non-negative" in capsys.readouterr().err

    def test_bad_thread_count(self, capsys):
        """Test rejection of zero threads."""
        assert run_main(["--threads", "0", "validate", "znil"]) == 1
        assert "threads must be at least 1" in capsys.readouterr().err

    def test_missing_document(self, tmp_path, capsys):
        """Test a document path that does not exist."""
        assert run_main(["--document", str(tmp_path / "none.sq"), "validate"]) == 1
        assert capsys.readouterr().err.startswith("Error:")

    @pytest.mark.integration
    def test_document_validate(self, tmp_path, capsys):
        """Test validating a document and running its checks."""
        path = tmp_path / "fixtures.sq"
        path.write_text(
            "abelian A = [2]\n"
            "square N = atensor(A)\n"
            "monoid C2 = table{e,t; t*t=e}\n"
            "check invariants N\n"
            "check suite\n"
        )
        assert run_main(["--document", str(path), "validate"]) == 0
        out = capsys.readouterr().out
        assert "== validate N ==" in out
        assert "== line 4: invariants N ==" in out
        assert "[SKIP] suite" in out

    def test_document_syntax_error(self, tmp_path, capsys):
        """Test that syntax errors carry line and column."""
        path = tmp_path / "broken.sq"
        path.write_text("abelian A = [2\n")
        assert run_main(["--document", str(path), "validate"]) == 1
        assert "Error: 1:15:" in capsys.readouterr().err


class TestRunCommand:
    """Tests for run_command."""

    def test_returns_reports(self):
        """Test running a command programmatically."""
        reports = run_command("validate", ["znil", "atensor_z2"])
        assert [r.title for r in reports] == ["validate znil", "validate atensor_z2"]
        assert all(r.ok for r in reports)

    def test_document_names_first(self):
        """Test that document names resolve before the registry."""
        doc = parse_document("abelian A = [3]\nsquare znil = atensor(A)")
        report = run_command("invariants", ["znil"], doc)[0]
        assert report.summary["coker"] == "0"

    def test_unknown_command(self):
        """Test an unknown command."""
        with pytest.raises(ValueError, match="unknown command"):
            run_command("frobnicate")

    def test_bad_arguments(self):
        """Test arguments the parser rejects."""
        with pytest.raises(ValueError, match="bad arguments for 'homotopy'"):
            run_command("homotopy", ["znil", "--bogus"])
