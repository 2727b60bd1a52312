"""Tests for cosymmetry objects, J and Psi."""

import pytest

from squaregroups import registry
from squaregroups.cosym import (
    CosymmetryObject,
    J,
    Psi,
    Sym2Group,
    coker_criterion_report,
    cos_free,
    cos_obstruction_report,
    cos_tensor,
    cos_tensor_report,
    cos_unit,
    cos_validate,
    cosymmetry,
    find_cosymmetries,
    is_sg_sigma,
    j_report,
    j_znil_comparison,
    monoidal_report,
    products_report,
    psi_comparison,
)
from squaregroups.sqcore import SgMorphism, validate_square_group
from squaregroups.utils import ValidationError
from squaregroups.zalgebra import FgAbelianGroup


class TestSym2:
    """Tests for symmetric squares."""

    def test_free_rank_two(self):
        """Sym^2(Z^2) = Z^3."""
        assert Sym2Group(FgAbelianGroup.free(2)).group.isomorphic(FgAbelianGroup.free(3))

    def test_cyclic(self):
        """Sym^2(Z/6) = Z/6."""
        assert Sym2Group(FgAbelianGroup.cyclic(6)).group.isomorphic(FgAbelianGroup.cyclic(6))

    def test_product_commutes(self):
        """ab = ba in Sym^2."""
        sym = Sym2Group(FgAbelianGroup.free(2))
        assert sym.product([1, 0], [0, 1]) == sym.product([0, 1], [1, 0])


class TestCosymmetries:
    """Tests for (A, delta)."""

    def test_unit_delta(self):
        """delta(n) = C(n, 2) g g on (Z, binom)."""
        x = cos_unit()
        assert x.delta([2]) == x.sym.product([1], [1])
        assert x.delta([3]) == x.sym.group.scale(3, x.sym.product([1], [1]))

    def test_z2_obstructed(self):
        """No cosymmetry exists on Z/2."""
        assert find_cosymmetries(FgAbelianGroup.cyclic(2)) == []
        report = cos_obstruction_report(FgAbelianGroup.cyclic(2))
        assert not report.ok
        assert report.summary["count"] == "0"
        with pytest.raises(ValidationError, match="cos.torsion"):
            cosymmetry(FgAbelianGroup.cyclic(2))

    def test_z3_structures(self):
        """Every value of delta on the generator of Z/3 works."""
        assert len(find_cosymmetries(FgAbelianGroup.cyclic(3))) == 3

    def test_infinite_search(self, z):
        """The search needs a finite symmetric square."""
        with pytest.raises(ValueError, match="infinite"):
            find_cosymmetries(z)

    def test_value_count(self, z):
        """One value per generator."""
        with pytest.raises(ValueError, match="expected 1 generator values"):
            CosymmetryObject(z, Sym2Group(z), [])

    def test_validate_free(self):
        """(Z[s,t], 0) satisfies the law."""
        assert cos_validate(cos_free(["s", "t"])).ok


class TestMonoidal:
    """Tests for the tensor product of cosymmetry objects."""

    def test_free_with_unit(self):
        """Free objects with the unit satisfy the monoidal laws."""
        report = cos_tensor_report(cos_free(["s"]), cos_free(["t", "u"]), cos_unit())
        assert report.ok, report.first_failure()

    def test_torsion(self):
        """(Z/3, 0) (x) (Z/3, 0) is a cosymmetry on Z/3."""
        z3 = cosymmetry(FgAbelianGroup.cyclic(3))
        result = cos_tensor(z3, z3)
        assert result.group.isomorphic(FgAbelianGroup.cyclic(3))
        assert cos_validate(result).ok

    @pytest.mark.parametrize("names", [(["s"], ["t"]), ([], ["t"])])
    def test_j_is_monoidal(self, names):
        """J(x) (.) J(y) = J(x (x) y)."""
        left = cos_free(names[0]) if names[0] else cos_unit()
        report = monoidal_report(left, cos_free(names[1]))
        assert report.ok, report.first_failure()


class TestJAndPsi:
    """Tests for the functors J and Psi."""

    @pytest.mark.parametrize("build", [
        cos_unit,
        lambda: cos_free(["s", "t"]),
        lambda: cosymmetry(FgAbelianGroup.cyclic(3)),
    ])
    def test_j_roundtrip(self, build):
        """Psi J(x) recovers x and J(Psi(M)) -> M is an isomorphism."""
        x = build()
        assert validate_square_group(J(x)).ok
        report = j_report(x)
        assert report.ok, report.first_failure()

    def test_znil_is_j_of_free(self):
        """Z_nil[S] = J(Z[S], 0)."""
        assert j_znil_comparison(["s", "t"]).is_iso()

    def test_membership(self, z_nil, znil_st, atensor_z2):
        """Z_nil[S] is in the cross-effect subcategory, (Z/2)^(x) is not."""
        assert is_sg_sigma(z_nil)
        assert is_sg_sigma(znil_st)
        assert not is_sg_sigma(atensor_z2)

    def test_psi_rejects_atensor(self, atensor_z):
        """Psi needs the cross-effect to be an isomorphism."""
        with pytest.raises(ValidationError, match="not an isomorphism"):
            Psi(atensor_z)

    def test_psi_of_znil(self, z_nil):
        """Psi(Z_nil) is Z with a cosymmetry and compares back."""
        x = Psi(z_nil)
        assert str(x.group) == "Z"
        assert psi_comparison(z_nil).is_iso()

    def test_iso_criterion(self, znil_st):
        """Isomorphisms are detected on Coker(P)."""
        ident = SgMorphism.identity(znil_st)
        assert coker_criterion_report(ident).ok
        zero = SgMorphism.zero(znil_st, znil_st)
        assert coker_criterion_report(zero).ok

    def test_iso_criterion_three_generators(self):
        """The criterion runs when Coker(P) has more generators than its Smith form."""
        m = registry.square("znil_stu")
        report = coker_criterion_report(SgMorphism.identity(m))
        assert report.ok, report.first_failure()

    def test_criterion_needs_subcategory(self, atensor_z2):
        """Outside the subcategory the criterion does not apply."""
        report = coker_criterion_report(SgMorphism.identity(atensor_z2))
        assert report.first_failure().name == "criterion.sg_sigma"

    def test_products(self, z_nil, znil_st):
        """Both products stay in the subcategory and sigma is an isomorphism."""
        report = products_report(z_nil, znil_st)
        assert report.ok, report.first_failure()
