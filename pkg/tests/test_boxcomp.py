"""Tests for pre-square groups, the composition product and sigma."""

import pytest

from squaregroups.boxcomp import (
    PreSquareGroup,
    box,
    box_unit_report,
    compose_pointed,
    cross_effect_sequence_report,
    gamma_group_tensor_report,
    gamma_model,
    gamma_model_report,
    group_tensor,
    group_tensor_atensor_report,
    group_tensor_nil_report,
    group_tensor_unit_report,
    n_star_psg,
    pointed_maps,
    psg_compat_report,
    psg_forget,
    psg_from_abelian,
    psg_lift_report,
    sigma,
    sigma_naturality_report,
    sigma_report,
    square_from_psg,
    validate_psg,
)
from squaregroups.constructors import zq
from squaregroups.nil2 import Nil2Datum
from squaregroups.sqcore import SgMorphism, SquareGroup
from squaregroups.utils import UnsupportedInstanceError, ValidationError
from squaregroups.zalgebra import FgAbelianGroup


class TestPreSquareGroups:
    """Tests for psg and its lifts."""

    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2", "z_q", "znil_st"])
    def test_forget_is_valid(self, fixture, request):
        """psg(M) satisfies the pre-square group laws."""
        assert validate_psg(psg_forget(request.getfixturevalue(fixture))).ok

    def test_from_abelian(self, z2):
        """An abelian group is a pre-square group with zero ee-level."""
        m = psg_from_abelian(z2)
        assert validate_psg(m).ok
        assert m.coker.group.order() == 2

    def test_lift_recovers_square(self, z_q):
        """H of the original square group lifts psg(M)."""
        pm = psg_forget(z_q)
        assert psg_lift_report(pm, z_q.h).ok
        assert isinstance(square_from_psg(pm, z_q.h), SquareGroup)

    def test_lift_shape_mismatch(self, z_nil, z_q):
        """H must live on the levels of the pre-square group."""
        report = psg_lift_report(psg_forget(z_nil), z_q.h)
        assert report.first_failure().name == "psg.lift_shape"
        with pytest.raises(ValidationError):
            square_from_psg(psg_forget(z_nil), z_q.h)

    def test_n_star(self, z_nil):
        """n* is a morphism of psg(M) and needs the underlying square group."""
        f = n_star_psg(psg_forget(z_nil), 3)
        assert f.fee(z_nil.ee.gen(0)) == z_nil.ee.reduce([9])
        with pytest.raises(UnsupportedInstanceError, match="needs the quadratic map"):
            n_star_psg(psg_from_abelian(FgAbelianGroup.cyclic(2)), 2)


class TestPointedSets:
    """Tests for finite pointed sets and the Gamma-model."""

    def test_pointed_maps(self):
        """[1] -> [2] has three pointed maps."""
        assert pointed_maps(1, 2) == [(None,), (0,), (1,)]
        assert len(pointed_maps(2, 2)) == 9

    def test_compose(self):
        """Composition follows the basepoint."""
        assert compose_pointed((1, 0), (0, None)) == (1, None)

    def test_gamma_model_names(self, z_nil):
        """The model over [1] keeps its names and pre-square group."""
        pm = psg_forget(z_nil)
        model = gamma_model(["1"], pm)
        assert list(model.names) == ["1"]
        assert model.psg is pm

    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2"])
    def test_gamma_model(self, fixture, request):
        """The Gamma-model is a functor that recovers the pre-square group."""
        report = gamma_model_report(psg_forget(request.getfixturevalue(fixture)))
        assert report.ok, report.first_failure()


class TestGroupTensor:
    """Tests for G (x) M on nil2 groups."""

    def test_group_tensor_fields(self, z_nil):
        """G (x) M remembers both factors."""
        g = Nil2Datum.free(["s"])
        gt = group_tensor(g, z_nil)
        assert gt.group is g
        assert gt.square is z_nil

    def test_unit(self, atensor_z2):
        """Z (x) M = M_e."""
        assert group_tensor_unit_report(atensor_z2).ok

    def test_znil(self):
        """G (x) Z_nil = G for free nil2 groups."""
        assert group_tensor_nil_report(["s", "t"]).ok

    def test_atensor(self, z2):
        """G (x) A^(x) is abelian of the expected shape."""
        assert group_tensor_atensor_report(Nil2Datum.free(["s", "t"]), z2).ok

    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2"])
    def test_cross_effect_sequence(self, fixture, request):
        """The cross-effect of - (x) M is M_ee."""
        assert cross_effect_sequence_report(request.getfixturevalue(fixture)).ok

    def test_gamma_agrees(self, z_nil):
        """S (.) psg(M) = <S> (x) M naturally."""
        report = gamma_group_tensor_report(z_nil, sizes=(1, 2))
        assert report.ok, report.first_failure()


class TestBox:
    """Tests for the composition product."""

    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2", "z_q"])
    def test_units(self, fixture, request):
        """Z_nil is a two-sided unit and sigma respects it."""
        report = box_unit_report(request.getfixturevalue(fixture))
        assert report.ok, report.first_failure()

    def test_psg_compatible(self, z_nil, atensor_z2):
        """psg(M [] N) = psg(M) [] N."""
        assert psg_compat_report(z_nil, atensor_z2).ok

    def test_box_of_psg(self, z_nil, atensor_z2):
        """A pre-square group on the left gives a pre-square group."""
        assert isinstance(box(psg_forget(z_nil), atensor_z2), PreSquareGroup)
        assert isinstance(box(z_nil, atensor_z2), SquareGroup)

    def test_sigma_iso_on_znil(self, z_nil, znil_st):
        """sigma is an isomorphism inside the cross-effect subcategory."""
        assert sigma(z_nil, znil_st).is_iso()
        assert sigma_report(z_nil, z_nil).summary["sigma.iso"] == "True"

    def test_sigma_not_iso(self, atensor_z):
        """Outside it sigma can fail to be an isomorphism."""
        assert sigma_report(atensor_z, atensor_z).summary["sigma.iso"] == "False"

    def test_sigma_natural(self, z_nil, atensor_z2):
        """sigma commutes with [] and (.) of morphisms."""
        f = SgMorphism.identity(z_nil)
        g = SgMorphism.zero(atensor_z2, atensor_z2)
        assert sigma_naturality_report(f, g).ok

    def test_sigma_natural_zq(self, z_nil):
        """Naturality along a morphism out of Z^Q."""
        q = zq()
        g = SgMorphism.zero(q, z_nil)
        assert sigma_naturality_report(SgMorphism.identity(z_nil), g).ok
