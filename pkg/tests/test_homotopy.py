"""Tests for the spectrum homotopy groups and Tor."""

import pytest

from squaregroups import registry
from squaregroups.constructors import a_tensor
from squaregroups.homotopy import (
    free_resolution,
    homotopy_groups,
    k_postnikov,
    k_postnikov_report,
    les_check,
    spectrum_complex,
    spectrum_homotopy,
    spectrum_report,
    tor1_atensor,
    tor1_closed,
    tor1_report,
    tor_ee,
)
from squaregroups.suite import cyclic_sequence
from squaregroups.zalgebra import FgAbelianGroup


class TestSpectrum:
    """Tests for the homotopy groups of (-) (.) M."""

    def test_znil_values(self, z_nil):
        """Z_nil gives Z, Z/2, 0, Z/2."""
        assert [str(g) for g in homotopy_groups(z_nil, 3)] == ["Z", "Z/2", "0", "Z/2"]

    def test_atensor_vanishes(self, atensor_z):
        """Z^(x) has vanishing homotopy."""
        assert [str(g) for g in homotopy_groups(atensor_z, 3)] == ["0", "0", "0", "0"]

    def test_single_degree_matches(self, z_nil):
        """spectrum_homotopy agrees with the batch computation."""
        assert spectrum_homotopy(z_nil, 1).invariants == (2,)
        assert spectrum_homotopy(z_nil, 0).invariants == (0,)

    def test_negative_degree(self, z_nil):
        """Degrees are non-negative."""
        with pytest.raises(ValueError, match="non-negative"):
            spectrum_homotopy(z_nil, -1)

    def test_complex_needs_degree_one(self, z_nil):
        """The complex has at least one boundary."""
        with pytest.raises(ValueError, match="at least degree 1"):
            spectrum_complex(z_nil, 0)

    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2", "z_q", "abelian_z2", "znil_st"])
    def test_report_passes(self, fixture, request):
        """Periodicity and the k-invariant comparison hold."""
        m = request.getfixturevalue(fixture)
        assert spectrum_report(m).ok

    @pytest.mark.parametrize("name", ["atensor_z2z3", "e_id_z", "e_swap_z", "j_z3", "vfree_s", "znil_stu"])
    def test_report_passes_on_registry(self, name):
        """The k-invariant comparison runs on presentations not already in Smith form."""
        report = k_postnikov_report(registry.square(name))
        assert report.ok, report.first_failure()

    def test_report_summary(self, z_nil):
        """The report lists pi_0 .. pi_top."""
        summary = spectrum_report(z_nil, top=3).summary
        assert summary["pi_0"] == "Z"
        assert summary["pi_3"] == "Z/2"
        assert summary["k.nonzero"] == "True"

    def test_k_invariant(self, z_nil, atensor_z2):
        """The k-invariant is nonzero on Z_nil."""
        assert not k_postnikov(z_nil).k.is_zero()
        assert k_postnikov(z_nil).pi1.invariants == (2,)


class TestTor:
    """Tests for Tor."""

    def test_ee_levels(self, z_nil, atensor_z2):
        """The ee-level of Tor is classical Tor of the ee-levels."""
        assert str(tor_ee(0, z_nil, z_nil)) == "Z"
        assert tor_ee(1, atensor_z2, atensor_z2).order() == 16
        assert tor_ee(2, atensor_z2, atensor_z2).is_trivial()

    def test_tor1_atensor(self, atensor_z2):
        """Tor_1((Z/2)^(x), (Z/2)^(x)) = ((Z/2)^2)^(x)."""
        t = tor1_atensor(FgAbelianGroup.cyclic(2), atensor_z2)
        assert t.e.order() == 4
        assert t.ee.order() == 16

    def test_free_resolution(self):
        """Z/2 + Z is resolved by Z --(2, 0)--> Z^2."""
        a = FgAbelianGroup.diagonal([2, 0])
        d, eps = free_resolution(a)
        assert d.source.rank == 1
        assert d.rows == ((2, 0),)
        assert eps.is_surjective()

    @pytest.mark.parametrize("k", [2, 4])
    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2", "z_q"])
    def test_report_agrees_with_resolution(self, k, fixture, request):
        """The closed form matches the resolution."""
        m = request.getfixturevalue(fixture)
        assert tor1_report(FgAbelianGroup.cyclic(k), m).ok

    def test_tor_with_znil(self, z_nil):
        """Tor_1((Z/2)^(x), Z_nil) = 0."""
        assert tor1_report(FgAbelianGroup.cyclic(2), z_nil).summary["tor1"] == "0"

    def test_closed_form_dispatch(self, z_nil, atensor_z2):
        """Closed forms exist against A^(x) and zero, not against Z_nil."""
        assert tor1_closed(z_nil, atensor_z2) is not None
        assert tor1_closed(z_nil, a_tensor(FgAbelianGroup.trivial())).is_zero()
        assert tor1_closed(atensor_z2, z_nil) is None

    def test_les_on_cyclic_sequence(self, z_nil):
        """The Tor sequence of Z_nil (.) - on Z^(x) -> Z^(x) -> (Z/2)^(x) is exact."""
        i, p = cyclic_sequence(2)
        report = les_check(i, p, z_nil)
        assert report.ok, report.first_failure()
        assert report.summary["ker.ee"] == "0"
        assert any(r.name == "les.connecting" and r.passed for r in report.results)
