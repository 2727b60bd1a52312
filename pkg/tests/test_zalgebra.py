"""Tests for integer linear algebra and finitely generated abelian groups."""

import pytest
from hypothesis import given, settings, strategies as st

from squaregroups.utils import ValidationError
from squaregroups.zalgebra import (
    ChainComplexZ,
    FgAbelianGroup,
    FgabHom,
    FgabTensor,
    IntMatrix,
    chain_homology,
    direct_sum,
    fgab_from_presentation,
    fgab_tor1,
    smith_normal_form,
)


small_ints = st.integers(min_value=-6, max_value=6)


def square_rows(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


class TestIntMatrix:
    """Tests for IntMatrix."""

    def test_from_rows_and_index(self):
        """Entries are addressed by (row, column)."""
        m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert (m.rows, m.cols) == (2, 3)
        assert m[1, 2] == 6
        assert m.transpose().to_rows() == [[1, 4], [2, 5], [3, 6]]

    def test_ragged_rows_rejected(self):
        """Rows of different lengths are an error."""
        with pytest.raises(ValueError, match="ragged matrix"):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_matmul_shape_mismatch(self):
        """Incompatible shapes cannot be multiplied."""
        with pytest.raises(ValueError, match="cannot multiply"):
            IntMatrix.identity(2) @ IntMatrix.identity(3)

    def test_sympy_round_trip(self):
        """Conversion to sympy and back preserves entries."""
        m = IntMatrix.from_rows([[2, -1], [0, 7]])
        assert IntMatrix.from_sympy(m.to_sympy()) == m
        assert m.determinant() == 14

    def test_smith_normal_form_example(self):
        """The Smith form of [[2, 4], [6, 8]] is diag(2, 4)."""
        m = IntMatrix.from_rows([[2, 4], [6, 8]])
        u, d, v = smith_normal_form(m)
        assert u @ m @ v == d
        assert d.diagonal_entries() == [2, 4]
        assert d.is_diagonal()

    @pytest.mark.property
    @settings(max_examples=60, deadline=None)
    @given(square_rows(3))
    def test_smith_normal_form_property(self, rows):
        """u m v = d with a non-negative divisibility chain on the diagonal."""
        m = IntMatrix.from_rows(rows, 3)
        u, d, v = smith_normal_form(m)
        assert u @ m @ v == d
        assert d.is_diagonal()
        diag = d.diagonal_entries()
        assert all(x >= 0 for x in diag)
        for a, b in zip(diag, diag[1:]):
            if a:
                assert b % a == 0
            else:
                assert b == 0

    @pytest.mark.property
    @settings(max_examples=60, deadline=None)
    @given(square_rows(3))
    def test_group_order_matches_determinant(self, rows):
        """Z^n / rowspan(M) has order |det M| whenever det M != 0."""
        det = IntMatrix.from_rows(rows, 3).determinant()
        group = FgAbelianGroup(3, rows)
        if det == 0:
            assert not group.is_finite()
        else:
            assert group.order() == abs(det)


class TestFgAbelianGroup:
    """Tests for FgAbelianGroup."""

    def test_invariant_factors_combine(self):
        """Z/2 + Z/3 is cyclic of order 6."""
        group = FgAbelianGroup.diagonal([2, 3])
        assert group.invariants == (6,)
        assert group.order() == 6
        assert str(group) == "Z/6"

    def test_from_presentation(self):
        """Presentations by rows or by an IntMatrix."""
        assert str(fgab_from_presentation(1, [[2]])) == "Z/2"
        assert str(fgab_from_presentation(1, [])) == "Z"
        assert fgab_from_presentation(2, IntMatrix.diagonal([2, 3])).invariants == (6,)
        with pytest.raises(ValueError, match="columns"):
            fgab_from_presentation(3, IntMatrix.diagonal([2, 3]))

    def test_free_and_trivial(self):
        """Free groups are infinite; the trivial group prints as 0."""
        assert FgAbelianGroup.free(2).invariants == (0, 0)
        assert FgAbelianGroup.free(2).order() is None
        assert str(FgAbelianGroup.trivial()) == "0"
        assert FgAbelianGroup.trivial().is_trivial()

    def test_mixed_presentation(self):
        """Z^2 / <(2, 4)> is Z/2 + Z."""
        group = FgAbelianGroup(2, [[2, 4]])
        assert group.invariants == (2, 0)
        assert group.free_rank == 1
        assert group.torsion == (2,)

    def test_relation_length_checked(self):
        """Relations must have one entry per generator."""
        with pytest.raises(ValueError, match="does not have 2 entries"):
            FgAbelianGroup(2, [[1, 2, 3]])

    def test_element_arithmetic(self):
        """Elements are reduced into canonical coordinates."""
        group = FgAbelianGroup.cyclic(6)
        assert group.add((4,), (5,)) == (3,)
        assert group.neg((1,)) == (5,)
        assert group.element_order((2,)) == 3
        assert len(list(group.elements())) == 6

    def test_infinite_enumeration_rejected(self):
        """Only finite groups can be enumerated."""
        with pytest.raises(ValueError, match="infinite group"):
            list(FgAbelianGroup.free(1).elements())

    def test_quotient(self):
        """Z / 4Z is Z/4 and the projection sends 1 to the generator."""
        q, proj = FgAbelianGroup.free(1).quotient([[4]])
        assert q.invariants == (4,)
        assert proj((5,)) == (1,)

    def test_direct_sum_pack_unpack(self):
        """Packing and unpacking summand components are inverse."""
        summed = direct_sum([FgAbelianGroup.cyclic(2), FgAbelianGroup.free(1)])
        x = summed.pack([(1,), (3,)])
        assert summed.unpack(x) == [(1,), (3,)]
        assert summed.group.invariants == (2, 0)


class TestFgabHom:
    """Tests for homomorphisms."""

    def test_doubling_on_z(self, z):
        """Multiplication by two is injective with cokernel Z/2."""
        f = FgabHom.from_generator_images(z, z, [[2]])
        assert f.is_injective()
        assert not f.is_surjective()
        assert f.cokernel()[0].invariants == (2,)

    def test_relation_violation(self, z, z2):
        """Z/2 -> Z cannot send the generator to 1."""
        with pytest.raises(ValidationError) as excinfo:
            FgabHom.from_generator_images(z2, z, [[1]])
        assert excinfo.value.check == "hom.relation"

    def test_kernel_of_projection(self, z):
        """The kernel of Z -> Z/3 is 3Z, again infinite cyclic."""
        z3 = FgAbelianGroup.cyclic(3)
        f = FgabHom.from_generator_images(z, z3, [[1]])
        kernel, incl = f.kernel()
        assert kernel.invariants == (0,)
        assert incl(kernel.gen(0)) in [(3,), (-3,)]

    def test_inverse(self):
        """An automorphism of Z/5 has an inverse composing to the identity."""
        z5 = FgAbelianGroup.cyclic(5)
        f = FgabHom(z5, z5, [[2]])
        g = f.inverse()
        assert g.compose(f).equals(FgabHom.identity(z5))

    def test_inverse_of_non_injective(self, z):
        """Non-injective maps have no inverse."""
        with pytest.raises(ValidationError, match="not injective"):
            FgabHom.zero(z, z).inverse()

    def test_preimage(self, z):
        """Preimages exist exactly on the image."""
        f = FgabHom.from_generator_images(z, z, [[3]])
        assert f.preimage((6,)) == (2,)
        assert f.preimage((4,)) is None


class TestTensorAndTor:
    """Tests for the classical tensor product and Tor."""

    def test_tensor_of_cyclics(self):
        """Z/4 (x) Z/6 = Z/2."""
        t = FgabTensor(FgAbelianGroup.cyclic(4), FgAbelianGroup.cyclic(6))
        assert t.group.invariants == (2,)

    def test_tensor_with_z(self, z):
        """Z (x) A = A."""
        a = FgAbelianGroup.diagonal([2, 4])
        assert FgabTensor(z, a).group.isomorphic(a)

    def test_pairing_bilinear(self, z):
        """2 (x) 3 = 6 (1 (x) 1) in Z (x) Z."""
        t = FgabTensor(z, z)
        assert t.pair((2,), (3,)) == t.group.scale(6, t.pair((1,), (1,)))

    def test_tor_of_cyclics(self):
        """Tor(Z/4, Z/6) = Z/2."""
        tor, _ = fgab_tor1(FgAbelianGroup.cyclic(4), FgAbelianGroup.cyclic(6))
        assert tor.invariants == (2,)

    def test_tor_with_free(self, z, z2):
        """Tor(Z, A) = 0."""
        assert fgab_tor1(z, z2)[0].is_trivial()


class TestChainComplex:
    """Tests for chain complexes and homology."""

    def test_homology_of_doubling(self, z):
        """Z --2--> Z has H_0 = Z/2 and H_1 = 0."""
        top = FgAbelianGroup.free(1)
        d = FgabHom.from_generator_images(top, z, [[2]])
        c = ChainComplexZ([z, top], [d])
        assert chain_homology(c, 0).invariants == (2,)
        assert chain_homology(c, 1).is_trivial()

    def test_composite_must_vanish(self, z):
        """Consecutive boundaries compose to zero."""
        g1, g2 = FgAbelianGroup.free(1), FgAbelianGroup.free(1)
        d1 = FgabHom(g1, z, [[1]])
        d2 = FgabHom(g2, g1, [[1]])
        with pytest.raises(ValidationError, match="is not zero"):
            ChainComplexZ([z, g1, g2], [d1, d2])

    def test_degree_out_of_range(self, z):
        """Homology is only defined inside the complex."""
        c = ChainComplexZ([z], [])
        with pytest.raises(ValueError, match="outside the complex"):
            chain_homology(c, 1)
