"""Tests for square groups, morphisms and derived operators."""

import pytest

from squaregroups.constructors import a_tensor_map, znil
from squaregroups.nil2 import CentralHom, Nil2Datum, QuadraticMap
from squaregroups.sqcore import (
    SgMorphism,
    SquareGroup,
    check_inverse_pair,
    n_star,
    n_star_report,
    product,
    validate_square_group,
)
from squaregroups.utils import ValidationError
from squaregroups.zalgebra import FgAbelianGroup, FgabHom


class TestSquareGroup:
    """Tests for SquareGroup construction and structure maps."""

    def test_znil_structure(self, z_nil):
        """Z_nil has H(n) = C(n, 2) and P = 0."""
        x = z_nil.e.gen(0)
        assert z_nil.H(3 * x) == (3,)
        assert z_nil.P((5,)).is_zero()
        assert z_nil.cross(x, x) == (1,)
        assert not z_nil.is_abelian()
        assert not z_nil.is_finite()

    def test_znil_validates(self, z_nil):
        """Every axiom passes on Z_nil."""
        report = validate_square_group(z_nil)
        assert report.ok
        assert {r.name for r in report.results} >= {"sg.cross_p", "sg.p_cross", "sg.php"}

    def test_nonzero_p_on_znil_rejected(self):
        """P = Id on Z_nil's data breaks (P a | y) = 0."""
        e = Nil2Datum.abelian(FgAbelianGroup.free(1), ["1"])
        ee = FgAbelianGroup.free(1)
        p = CentralHom(ee, e, [e.gen(0)], check=False)
        h = QuadraticMap(e, ee, [(0,)], [[(1,)]])
        with pytest.raises(ValidationError) as excinfo:
            SquareGroup(e, ee, p, h)
        assert excinfo.value.check == "sg.cross_p"

    def test_mismatched_levels_rejected(self, z_nil):
        """P and H must live on the datum they are given with."""
        other = Nil2Datum.abelian(FgAbelianGroup.free(1), ["1"])
        with pytest.raises(ValueError, match="e-level datum"):
            SquareGroup(other, z_nil.ee, z_nil.p, z_nil.h)

    def test_summary_keys(self, z_nil):
        """The summary names the structural invariants."""
        summary = z_nil.summary()
        assert summary["ee"] == "Z"
        assert summary["coker_p"] == "Z"

    def test_atensor_is_quadratic_module(self, atensor_z):
        """A^(x) is abelian with vanishing Delta."""
        assert atensor_z.is_abelian()
        assert atensor_z.is_quadratic_z_module()
        assert atensor_z.coker.group.is_trivial()


class TestDerivedData:
    """Tests for T, Delta and k."""

    def test_znil_t_and_delta(self, z_nil):
        """On Z_nil, T = -Id and Delta = Id."""
        d = z_nil.derived
        assert d.T.equals(FgabHom.identity(z_nil.ee).scaled(-1))
        assert d.delta(d.coker.group.gen(0)) == (1,)
        assert d.check_report().ok

    def test_znil_k_nonzero(self, z_nil):
        """k is nonzero on Z_nil and lands in Z/2."""
        d = z_nil.derived
        assert d.q_group.invariants == (2,)
        assert d.ker_pbar.order() == 2
        assert not d.k.is_zero()

    def test_atensor_swaps(self, atensor_z):
        """T on Z^(x) swaps the two summands."""
        d = atensor_z.derived
        assert d.T((1, 0)) == (0, 1)
        assert d.check_report().ok

    def test_derived_checks_on_zq(self, z_q):
        """The derived identities hold on Z^Q."""
        assert z_q.derived.check_report().ok


class TestNStar:
    """Tests for n*."""

    def test_two_star_on_znil(self, z_nil):
        """2* is multiplication by two on Z_nil."""
        two = n_star(z_nil, 2)
        x = z_nil.e.gen(0)
        assert two(x) == 2 * x

    @pytest.mark.parametrize("fixture", ["z_nil", "atensor_z2", "z_q", "znil_st"])
    def test_laws(self, fixture, request):
        """The n* laws hold for small n."""
        m = request.getfixturevalue(fixture)
        assert n_star_report(m, values=(-2, -1, 0, 1, 2)).ok


class TestMorphisms:
    """Tests for SgMorphism."""

    def test_identity(self, z_nil):
        """The identity is an isomorphism and its own inverse."""
        ident = SgMorphism.identity(z_nil)
        assert ident.is_iso()
        assert check_inverse_pair(ident, ident.inverse()).ok

    def test_doubling_on_atensor(self, atensor_z):
        """Doubling induces a non-invertible endomorphism of Z^(x)."""
        f = a_tensor_map(FgabHom.identity(FgAbelianGroup.free(1)).scaled(2), atensor_z, atensor_z)
        assert not f.is_iso()
        assert not f.is_epi()
        assert not f.is_zero()

    def test_h_mismatch_rejected(self, z_nil):
        """e-level Id with ee-level 2 does not preserve the cross-effect."""
        with pytest.raises(ValidationError) as excinfo:
            SgMorphism.from_images(z_nil, z_nil, z_nil.word_gens(), [[2]])
        assert excinfo.value.check == "morphism.cross"

    def test_compose_requires_match(self, z_nil, atensor_z):
        """Only composable morphisms compose."""
        f = SgMorphism.identity(z_nil)
        g = SgMorphism.identity(atensor_z)
        with pytest.raises(ValueError, match="non-composable"):
            f.compose(g)


class TestProduct:
    """Tests for finite products."""

    def test_product_validates(self, z_nil, atensor_z):
        """Z_nil x Z^(x) is a square group with ee = Z^3."""
        prod = product(z_nil, atensor_z)
        assert validate_square_group(prod.square).ok
        assert prod.square.ee.invariants == (0, 0, 0)

    def test_induced_map(self):
        """pr_1 o <id, 0> = id."""
        m = znil()
        n = znil()
        prod = product(m, n)
        pairing = prod.induced(SgMorphism.identity(m), SgMorphism.zero(m, n))
        assert prod.projections[0].compose(pairing).equals(SgMorphism.identity(m))
        assert prod.projections[1].compose(pairing).is_zero()
