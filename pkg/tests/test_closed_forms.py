"""Tests for the closed forms of tensor products."""

import pytest

from squaregroups.closed_forms import (
    CLOSED_FORMS,
    abelian_closure_report,
    g_n_datum,
    tensor_ab_sq,
    tensor_atensor,
    tensor_qz,
    tensor_vn,
    tensor_zq,
    znil_monoidal,
)
from squaregroups.constructors import from_abelian
from squaregroups.utils import ShapeMismatchError
from squaregroups.zalgebra import FgAbelianGroup


class TestATensor:
    """Tests for A^(x) (.) M."""

    @pytest.mark.parametrize("fixture", ["z_nil", "z_q", "atensor_z2"])
    def test_comparison_is_iso(self, z2, fixture, request):
        """The comparison map is an isomorphism onto the presented product."""
        cf = tensor_atensor(z2, request.getfixturevalue(fixture))
        assert cf.iso.is_iso()
        assert cf.report().ok

    def test_znil_factor(self, z, z_nil):
        """Z^(x) (.) Z_nil = Z^(x)."""
        cf = tensor_atensor(z, z_nil)
        assert cf.square.e.abelianization.group.isomorphic(FgAbelianGroup.free(1))
        assert cf.summary["ee"] == str(cf.square.ee)


class TestZQAndVn:
    """Tests for Z^Q (.) M and V(n) (.) M."""

    @pytest.mark.parametrize("fixture", ["abelian_z2", "atensor_z", "z_nil"])
    def test_zq(self, fixture, request):
        """Z^Q (.) M lives on M_ee x M_e."""
        m = request.getfixturevalue(fixture)
        cf = tensor_zq(m)
        assert cf.report().ok
        assert cf.square.ee.isomorphic(FgAbelianGroup.diagonal(list(m.ee.invariants) * 3))

    def test_vn(self, z_nil):
        """V(1) (.) Z_nil has ee-level Z^3."""
        cf = tensor_vn(1, z_nil)
        assert cf.report().ok
        assert cf.summary["ee.copies"] == "3"
        assert cf.square.ee.isomorphic(FgAbelianGroup.free(3))

    def test_vn_two(self, atensor_z2):
        """V(2) (.) (Z/2)^(x) has eight copies of the ee-level."""
        cf = tensor_vn(2, atensor_z2)
        assert cf.report().ok
        assert cf.square.ee.order() == atensor_z2.ee.order() ** 8

    def test_vn_needs_positive_n(self, z_nil):
        """n starts at one."""
        with pytest.raises(ShapeMismatchError, match="n >= 1"):
            tensor_vn(0, z_nil)

    def test_g_n_datum(self, z_nil):
        """G_2(Z_nil) x Z^2 carries one pair."""
        layout = g_n_datum(2, z_nil)
        assert layout.pairs == [(0, 1)]


class TestAbelianForms:
    """Tests for products with an abelian left factor."""

    def test_ab_sq(self, atensor_z2, z_q):
        """The pushout description matches."""
        assert tensor_ab_sq(atensor_z2, z_q).report().ok

    def test_ab_sq_needs_abelian(self, z_nil, z_q):
        """Z_nil is not abelian."""
        with pytest.raises(ShapeMismatchError, match="not an abelian square group"):
            tensor_ab_sq(z_nil, z_q)

    def test_qz(self, atensor_z2):
        """E(A_ee (x) B_ee, T (x) T) + Coker (x) Coker."""
        cf = tensor_qz(atensor_z2, from_abelian(FgAbelianGroup.free(1)))
        assert cf.report().ok
        assert "quadratic" in cf.summary

    def test_qz_needs_quadratic(self, abelian_z2, z_nil):
        """Z_nil has nonzero Delta."""
        with pytest.raises(ShapeMismatchError, match="not a quadratic Z-module"):
            tensor_qz(abelian_z2, z_nil)

    @pytest.mark.parametrize("right", ["z_nil", "z_q", "atensor_z2"])
    def test_closure(self, abelian_z2, right, request):
        """An abelian left factor gives an abelian product."""
        assert abelian_closure_report(abelian_z2, request.getfixturevalue(right)).ok

    def test_closure_skips_nonabelian(self, z_nil, z_q):
        """Non-abelian left factors are skipped."""
        report = abelian_closure_report(z_nil, z_q)
        assert [r.name for r in report.skipped] == ["closure.abelian"]


class TestZnilMonoidal:
    """Tests for Z_nil[S] (.) Z_nil[S']."""

    def test_two_by_three(self):
        """Six pairs give ee rank 36."""
        cf = znil_monoidal(["s", "t"], ["u", "v", "w"])
        assert cf.report().ok
        assert cf.summary["ee.rank"] == "36"
        assert cf.square.e.word_names()[0] == "s.u"

    def test_registry_of_forms(self):
        """Every closed form is reachable by name."""
        assert set(CLOSED_FORMS) == {"atensor", "zq", "vn", "ab_sq", "qz", "znil"}
