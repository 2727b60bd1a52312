"""Tests for the standard square groups."""

import pytest

from squaregroups.constructors import (
    a_tensor,
    e_involution,
    free_cover,
    free_sq,
    from_abelian,
    involution_by_name,
    v_free,
    znil_set,
)
from squaregroups.limits import is_epi
from squaregroups.sqcore import validate_square_group
from squaregroups.utils import ShapeMismatchError, ValidationError
from squaregroups.zalgebra import FgAbelianGroup, FgabHom


class TestZnil:
    """Tests for Z_nil and Z_nil[S]."""

    def test_znil_set_levels(self, znil_st):
        """Z_nil[s, t] has e = <s, t>^nil and ee = Z[S] (x) Z[S]."""
        assert znil_st.e.n == 2
        assert znil_st.e.central.invariants == (0,)
        assert znil_st.ee.invariants == (0, 0, 0, 0)
        assert not znil_st.is_abelian()

    def test_znil_set_p_is_commutator(self, znil_st):
        """P(s (x) t) = [t, s]."""
        e = znil_st.e
        s, t = e.gen(0), e.gen(1)
        assert znil_st.P((0, 1, 0, 0)) == e.commutator(t, s)
        assert znil_st.cross(s, t) == (0, 0, 1, 0)

    @pytest.mark.parametrize("names", [["s"], ["s", "t", "u"]])
    def test_znil_set_validates(self, names):
        """Z_nil[S] satisfies the axioms for small S."""
        assert validate_square_group(znil_set(names)).ok


class TestATensor:
    """Tests for A^(x)."""

    @pytest.mark.parametrize("invariants", [[0], [2], [4], [2, 3]])
    def test_validates(self, invariants):
        """A^(x) satisfies the axioms."""
        m = a_tensor(FgAbelianGroup.diagonal(invariants))
        assert validate_square_group(m).ok
        assert m.is_abelian()

    def test_levels(self, atensor_z2):
        """(Z/2)^(x) has e = Z/2 and ee = Z/2 + Z/2."""
        assert atensor_z2.e.order() == 2
        assert atensor_z2.ee.invariants == (2, 2)
        assert atensor_z2.is_finite()
        assert atensor_z2.H(atensor_z2.e.gen(0)) == (1, 1)


class TestZQAndV:
    """Tests for Z^Q and V(S)."""

    def test_zq_levels(self, z_q):
        """Z^Q has e = Z^2 and ee = Z^3."""
        assert z_q.e.abelianization.group.invariants == (0, 0)
        assert z_q.ee.invariants == (0, 0, 0)
        s = z_q.e.gen(0)
        assert z_q.H(s) == (1, 0, 0)
        assert z_q.P(z_q.H(s)) == z_q.e.gen(1)

    def test_vfree_one_generator(self, vfree_s):
        """V(s) has ee = Z[Hs] + Z[(s|s)] + Z[HPHs]."""
        assert vfree_s.ee.invariants == (0, 0, 0)
        assert validate_square_group(vfree_s).ok

    def test_vfree_two_generators(self):
        """V(s, t) has a non-abelian e-level and ee of rank 8."""
        m = v_free(["s", "t"])
        assert m.ee.rank == 8
        assert not m.e.is_abelian()
        assert validate_square_group(m).ok


class TestInvolutions:
    """Tests for E(L, tau)."""

    def test_negation_on_z(self, z):
        """E(Z, -Id) has e = Z, H = 2 and P the projection."""
        lattice, tau = involution_by_name(z, "neg")
        m = e_involution(lattice, tau)
        x = m.e.gen(0)
        assert m.e.abelianization.group.invariants == (0,)
        assert m.H(x) == (2,)
        assert m.P((1,)) == x

    def test_identity_on_z(self, z):
        """E(Z, Id) has e = Z/2 and H = 0."""
        lattice, tau = involution_by_name(z, "id")
        m = e_involution(lattice, tau)
        assert m.e.order() == 2
        assert m.H(m.e.gen(0)) == (0,)

    def test_swap(self, z):
        """The swap involution lives on Z + Z."""
        lattice, tau = involution_by_name(z, "swap")
        assert lattice.invariants == (0, 0)
        assert tau((1, 0)) == (0, 1)
        assert validate_square_group(e_involution(lattice, tau)).ok

    def test_non_involution_rejected(self, z):
        """tau must square to the identity."""
        with pytest.raises(ValidationError) as excinfo:
            e_involution(z, FgabHom.identity(z).scaled(2))
        assert excinfo.value.check == "involution"

    def test_separately_built_lattice(self, z):
        """tau may live on an equal group built elsewhere."""
        other = FgAbelianGroup.free(1)
        m = e_involution(z, FgabHom.identity(other).scaled(-1))
        assert m.ee is z
        assert m.H(m.e.gen(0)) == (2,)

    def test_wrong_shape_rejected(self, z):
        """tau must be an endomorphism of a group shaped like the lattice."""
        z2 = FgAbelianGroup.free(2)
        with pytest.raises(ShapeMismatchError, match="endomorphism"):
            e_involution(z, FgabHom.identity(z2))

    def test_unknown_name(self, z):
        """Only neg, id and swap are known."""
        with pytest.raises(ValueError, match="unknown involution 'flip'"):
            involution_by_name(z, "flip")


class TestAbelianAndFree:
    """Tests for from_abelian, free_sq and free_cover."""

    def test_from_abelian(self, abelian_z2):
        """A as a square group has zero ee-level."""
        assert abelian_z2.ee.is_trivial()
        assert abelian_z2.is_abelian()
        assert abelian_z2.label == "Z/2"

    def test_free_sq(self):
        """F(s; t) = V(s) x Z^(x) has ee of rank five."""
        m = free_sq(["s"], ["t"])
        assert m.kind == "free"
        assert m.ee.invariants == (0, 0, 0, 0, 0)
        assert validate_square_group(m).ok

    def test_free_cover_is_epi(self, z_nil):
        """The free cover of Z_nil is levelwise surjective."""
        f = free_cover(z_nil)
        assert f.target is z_nil
        assert is_epi(f)
