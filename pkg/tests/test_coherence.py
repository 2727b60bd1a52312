"""Tests for the associator and the coherence laws."""

import pytest

from squaregroups.coherence import (
    alpha_formula_report,
    assoc_inverse,
    assoc_iso,
    coherence_report,
    triple_tensor,
    verify_hexagons,
    verify_pentagon,
    verify_symmetry,
    verify_triangle,
    verify_units,
)
from squaregroups.sqcore import SgMorphism


class TestTripleTensor:
    """Tests for A (.) B (.) C."""

    def test_relations(self, z_nil, atensor_z2, abelian_z2):
        """The triple product satisfies its relations."""
        t = triple_tensor(z_nil, atensor_z2, abelian_z2)
        assert t.relations_report().ok

    def test_alpha_formula(self, atensor_z2, z_q, abelian_z2):
        """alpha takes its defining values on generators."""
        t = triple_tensor(atensor_z2, z_q, abelian_z2)
        assert alpha_formula_report(t).ok

    def test_cached(self, z_nil, atensor_z2):
        """The same factors give the same triple product."""
        assert triple_tensor(z_nil, atensor_z2, z_nil) is triple_tensor(z_nil, atensor_z2, z_nil)

    def test_associator_inverse(self, z_nil, atensor_z2, abelian_z2):
        """assoc and its inverse compose to the identity."""
        forward = assoc_iso(z_nil, atensor_z2, abelian_z2)
        back = assoc_inverse(z_nil, atensor_z2, abelian_z2)
        assert back.compose(forward).equals(SgMorphism.identity(forward.source))


class TestLaws:
    """Tests for pentagon, hexagons, triangle and units."""

    def test_pentagon(self, z_nil, atensor_z2, abelian_z2):
        """Both paths around the pentagon agree."""
        assert verify_pentagon(z_nil, atensor_z2, abelian_z2, z_nil).ok

    @pytest.mark.parametrize("factors", [
        ("z_nil", "atensor_z2", "abelian_z2"),
        ("atensor_z2", "z_q", "abelian_z2"),
    ])
    def test_hexagons(self, factors, request):
        """Both hexagons commute."""
        a, b, c = (request.getfixturevalue(f) for f in factors)
        report = verify_hexagons(a, b, c)
        assert report.ok, report.first_failure()
        assert {r.name for r in report.results} == {"hexagon.first", "hexagon.second"}

    @pytest.mark.parametrize("factors", [("z_nil", "atensor_z2"), ("atensor_z2", "z_q"), ("znil_st", "abelian_z2")])
    def test_triangle_and_symmetry(self, factors, request):
        """The triangle commutes and tau squares to the identity."""
        a, b = (request.getfixturevalue(f) for f in factors)
        assert verify_triangle(a, b).ok
        assert verify_symmetry(a, b).ok

    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2", "z_q", "abelian_z2"])
    def test_units(self, fixture, request):
        """iota and kappa are isomorphisms related by tau."""
        assert verify_units(request.getfixturevalue(fixture)).ok

    def test_wrong_associator_detected(self, atensor_z2):
        """The zero map in place of the associator breaks the triangle."""
        def broken(a, b, c):
            real = assoc_iso(a, b, c)
            return SgMorphism.zero(real.source, real.target)

        report = verify_triangle(atensor_z2, atensor_z2, assoc=broken)
        assert not report.ok
        assert report.first_failure().name == "triangle"

    def test_combined_report(self, z_nil, atensor_z2, abelian_z2):
        """coherence_report runs the requested laws on leading factors."""
        report = coherence_report([z_nil, atensor_z2, abelian_z2], checks=("hexagon", "triangle", "unit"))
        assert report.ok
        names = {r.name for r in report.results}
        assert "triangle" in names
        assert "pentagon" not in names
