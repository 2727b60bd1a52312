"""Tests for exactness properties of M (.) -."""

import pytest

from squaregroups.constructors import free_sq
from squaregroups.exactness import (
    cover_agreement_report,
    coproduct_sequence_report,
    exactness_checks,
    is_free_shape,
    left_map,
    mono_report,
    product_comparison,
    product_preservation_report,
    right_exactness_report,
)
from squaregroups.sqcore import SgMorphism
from squaregroups.suite import cyclic_sequence


class TestShapes:
    """Tests for projective shape recognition."""

    def test_free_shapes(self, z_q, vfree_s, atensor_z, z_nil, atensor_z2):
        """Z^Q, V(S), F(S;T) and free abelian A^(x) are projective."""
        assert is_free_shape(z_q)
        assert is_free_shape(vfree_s)
        assert is_free_shape(atensor_z)
        assert is_free_shape(free_sq(["s"], ["t"]))
        assert not is_free_shape(z_nil)
        assert not is_free_shape(atensor_z2)


class TestProducts:
    """Tests for product preservation."""

    @pytest.mark.parametrize("factors", [
        ("z_nil", "atensor_z2", "abelian_z2"),
        ("z_q", "z_nil", "atensor_z"),
    ])
    def test_preserved(self, factors, request):
        """M (.) (B x C) = (M (.) B) x (M (.) C)."""
        m, b, c = (request.getfixturevalue(f) for f in factors)
        assert product_preservation_report(m, b, c).ok

    def test_comparison_shape(self, z_nil, atensor_z2, abelian_z2):
        """The comparison map goes into the product of the tensor products."""
        phi = product_comparison(z_nil, atensor_z2, abelian_z2)
        assert phi.is_iso()


class TestSequences:
    """Tests for right exactness and the coproduct sequence."""

    @pytest.mark.parametrize("fixture,k", [("z_nil", 2), ("atensor_z2", 2), ("z_q", 3)])
    def test_right_exact(self, fixture, k, request):
        """Tensoring keeps cokernels."""
        i, p = cyclic_sequence(k)
        report = right_exactness_report(request.getfixturevalue(fixture), i, p)
        assert report.ok, report.first_failure()

    def test_bad_input_sequence(self, z_nil):
        """A sequence that is not short exact is reported, not tensored."""
        i, p = cyclic_sequence(2)
        report = right_exactness_report(z_nil, SgMorphism.zero(i.source, i.target), p)
        assert not report.ok
        assert report.first_failure().name.startswith("input.")

    def test_identity_tensor(self, z_nil, atensor_z2):
        """Id (.) Id is the identity."""
        ident = SgMorphism.identity(atensor_z2)
        assert left_map(z_nil, ident).is_iso()

    def test_coproduct_sequence(self, z_nil):
        """The kernel of M (.) (A v B) -> products is (M_ee (x) CA (x) CB)^(x)."""
        report = coproduct_sequence_report(z_nil, z_nil, z_nil)
        assert report.ok, report.first_failure()
        assert report.summary["kernel"] == "Z"

    def test_mono_on_projective(self, z_q):
        """A projective factor keeps injections injective."""
        i, _ = cyclic_sequence(2)
        assert mono_report(z_q, i).ok

    def test_mono_skipped(self, z_nil):
        """Non-projective factors are skipped."""
        i, _ = cyclic_sequence(2)
        report = mono_report(z_nil, i)
        assert report.ok
        assert report.skipped[0].name == "mono.projective"

    def test_combined(self, atensor_z, z_nil, abelian_z2):
        """exactness_checks bundles the sequence checks."""
        report = exactness_checks(atensor_z, z_nil, abelian_z2, ses=cyclic_sequence(2))
        assert report.ok, report.first_failure()
        assert any(r.name == "mono.e" for r in report.results)


class TestFreeCover:
    """Tests for the free-cover route to the tensor product."""

    @pytest.mark.slow
    def test_agrees_with_presentation(self, abelian_z2, atensor_z2):
        """The cokernel route gives the presented product."""
        assert cover_agreement_report(abelian_z2, atensor_z2).ok
