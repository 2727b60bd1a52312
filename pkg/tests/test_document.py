"""Tests for square-group documents."""

import pytest

from squaregroups.document import (
    CheckLine,
    Int,
    ListTerm,
    emit_document,
    parse_document,
    parse_syntax,
    tokenize_line,
)
from squaregroups.nil2 import Nil2Hom
from squaregroups.qrings import FiniteMonoid
from squaregroups.sqcore import SquareGroup
from squaregroups.utils import DocumentSyntaxError, UnresolvedReferenceError


SAMPLE = """\
# a small document
abelian A = [2, 3]
abelian B = rels(2; [2 0], [0 3])
square  M = znil_set{s,t}
square  N = atensor(A)
square  P = product(znil, N)
monoid  C2 = table{e,t; t*t=e}
morphism twice = times(M, 2)
check   homotopy M --max 3
check   invariants znil
"""


class TestTokenizer:
    """Tests for the line tokenizer."""

    def test_tokens_and_columns(self):
        """Tokens carry 1-based columns; comments are dropped."""
        tokens = tokenize_line("abelian A = [2, -3]  # note", 1)
        assert [t.text for t in tokens] == ["abelian", "A", "=", "[", "2", ",", "-3", "]"]
        assert tokens[1].column == 9

    def test_unexpected_character(self):
        """Unknown characters are reported with their column."""
        with pytest.raises(DocumentSyntaxError, match="unexpected character") as excinfo:
            tokenize_line("abelian A = [2, 3] $", 4)
        assert (excinfo.value.line, excinfo.value.column) == (4, 20)


class TestParsing:
    """Tests for parse_document."""

    def test_sample_document(self):
        """Every declaration resolves to an object of its kind."""
        doc = parse_document(SAMPLE)
        assert [d.name for d in doc.declarations] == ["A", "B", "M", "N", "P", "C2", "twice"]
        assert doc.objects["A"].invariants == (6,)
        assert doc.objects["B"].isomorphic(doc.objects["A"])
        assert isinstance(doc.objects["M"], SquareGroup)
        assert doc.objects["M"].ee.rank == 4
        assert doc.objects["N"].e.order() == 6
        assert isinstance(doc.objects["C2"], FiniteMonoid)
        assert len(doc.objects["C2"]) == 2
        assert isinstance(doc.objects["twice"], Nil2Hom)
        assert set(doc.squares()) == {"M", "N", "P"}

    def test_check_lines(self):
        """check lines keep their command and arguments."""
        doc = parse_document(SAMPLE)
        assert doc.checks == [
            CheckLine("homotopy", ("M", "--max", "3")),
            CheckLine("invariants", ("znil",)),
        ]
        assert doc.checks[0].line == 9

    def test_list_terms(self):
        """Lists accept optional commas."""
        doc = parse_syntax("abelian A = [2 4, 6]")
        assert doc.declarations[0].expr == ListTerm((Int(2), Int(4), Int(6)))

    def test_involution(self):
        """involution(A, swap) builds E(A + A, swap)."""
        doc = parse_document("abelian Z = [0]\nsquare E = involution(Z, swap)")
        assert doc.objects["E"].ee.invariants == (0, 0)


class TestErrors:
    """Tests for syntax and reference errors."""

    def test_unterminated_list(self):
        """A missing ']' is reported at the end of the line."""
        with pytest.raises(DocumentSyntaxError) as excinfo:
            parse_document("# header\nabelian A = [2, 3")
        assert (excinfo.value.line, excinfo.value.column) == (2, 18)
        assert "end of line" in str(excinfo.value)

    def test_trailing_input(self):
        """Only one expression follows '='."""
        with pytest.raises(DocumentSyntaxError, match="trailing input") as excinfo:
            parse_document("abelian A = [2] [3]")
        assert excinfo.value.column == 17

    def test_unknown_kind(self):
        """Declarations start with a known kind."""
        with pytest.raises(DocumentSyntaxError, match="unknown declaration kind 'group'"):
            parse_document("group A = [2]")

    def test_duplicate_name(self):
        """Names are declared once."""
        with pytest.raises(DocumentSyntaxError, match="already declared on line 1") as excinfo:
            parse_document("abelian A = [2]\nabelian A = [3]")
        assert excinfo.value.line == 2

    def test_unresolved_reference(self):
        """Undeclared names are reported with their line."""
        with pytest.raises(UnresolvedReferenceError, match="unresolved reference 'B' \\(line 2\\)"):
            parse_document("abelian A = [2]\nsquare N = atensor(B)")

    def test_forward_reference(self):
        """Names must be declared before they are used."""
        with pytest.raises(UnresolvedReferenceError):
            parse_document("square N = atensor(A)\nabelian A = [2]")

    def test_wrong_kind(self):
        """An abelian group is not a square group."""
        with pytest.raises(DocumentSyntaxError, match="expected a square"):
            parse_document("abelian A = [2]\nsquare M = A")

    def test_unresolved_check_argument(self):
        """check arguments must be declared or registry names."""
        with pytest.raises(UnresolvedReferenceError) as excinfo:
            parse_document("check invariants nowhere")
        assert excinfo.value.line == 1
        assert excinfo.value.name == "nowhere"

    def test_incomplete_monoid_table(self):
        """Every product of non-unit elements must be given."""
        with pytest.raises(DocumentSyntaxError, match="product t\\*t is not given"):
            parse_document("monoid C = table{e, t}")

    def test_unknown_constructor(self):
        """Unknown square constructors are rejected."""
        with pytest.raises(DocumentSyntaxError, match="unknown constructor 'smash'"):
            parse_document("square M = smash(znil, znil)")


class TestEmission:
    """Tests for the normal form."""

    def test_normal_form(self):
        """Declarations are emitted with canonical spacing."""
        text = emit_document(parse_syntax(SAMPLE))
        lines = text.splitlines()
        assert lines[0] == "abelian A = [2, 3]"
        assert lines[1] == "abelian B = rels(2; [2, 0], [0, 3])"
        assert lines[2] == "square M = znil_set{s, t}"
        assert lines[5] == "monoid C2 = table{e, t; t*t=e}"
        assert lines[-1] == "check invariants znil"

    def test_reparse(self):
        """The normal form parses back to the same document."""
        doc = parse_syntax(SAMPLE)
        assert parse_syntax(emit_document(doc)) == doc
