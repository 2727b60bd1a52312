"""Tests for the tensor product and bilinear maps."""

import pytest

from squaregroups.bilinear import (
    BilinearMap,
    bilinear_factorize,
    bilinear_report,
    factorization_report,
    universal,
    zero_bilinear,
)
from squaregroups.constructors import from_abelian
from squaregroups.sqcore import SgMorphism
from squaregroups.tensor import (
    Bar,
    Odot,
    derived_identities_report,
    left_linear_report,
    naturality_report,
    odot_product,
    structure_report,
    symmetric_report,
    symmetry,
    tensor,
    tensor_morphism,
    tensor_relations_report,
    tr_product,
    unit_left,
)
from squaregroups.utils import ValidationError
from squaregroups.zalgebra import FgAbelianGroup, FgabTensor


PAIRS = [
    ("z_nil", "atensor_z2"),
    ("atensor_z2", "z_nil"),
    ("atensor_z2", "z_q"),
    ("z_q", "abelian_z2"),
    ("znil_st", "atensor_z"),
]


@pytest.fixture(params=PAIRS, ids=["-".join(p) for p in PAIRS])
def pair(request):
    """A pair of factors covering every construction strategy."""
    left, right = request.param
    return request.getfixturevalue(left), request.getfixturevalue(right)


class TestConstruction:
    """Tests for building M (.) N."""

    def test_strategies(self, z_nil, atensor_z2, abelian_z2):
        """Z_nil factors and abelian pairs take shortcuts."""
        assert tensor(z_nil, atensor_z2).strategy != "presented"
        assert tensor(atensor_z2, atensor_z2).strategy == "presented"
        assert tensor(z_nil, atensor_z2, strategy="presented").strategy == "presented"
        assert tensor(abelian_z2, abelian_z2).strategy != "presented"

    def test_cached(self, z_nil, atensor_z2):
        """The same factors give the same product."""
        assert tensor(z_nil, atensor_z2) is tensor(z_nil, atensor_z2)

    def test_unknown_strategy(self, z_nil):
        """Only known strategies are accepted."""
        with pytest.raises(ValueError, match="unknown tensor strategy"):
            tensor(z_nil, z_nil, strategy="guess")

    def test_ee_level(self, atensor_z2, z_q):
        """The ee-level is the tensor product of the ee-levels."""
        tp = tensor(atensor_z2, z_q)
        assert tp.result.ee.isomorphic(tp.ee_tensor.group)
        assert tp.result.ee.isomorphic(FgabTensor(atensor_z2.ee, z_q.ee).group)

    def test_unit_product(self, z_nil):
        """Z_nil (.) Z_nil has the invariants of Z_nil."""
        res = tensor(z_nil, z_nil, strategy="presented").result
        assert str(res.coker.group) == "Z"
        assert res.ee.rank == 1

    @pytest.mark.parametrize("m,n,expected", [(2, 3, "0"), (4, 6, "Z/2"), (0, 5, "Z/5"), (0, 0, "Z")])
    def test_classical(self, m, n, expected):
        """Abelian groups multiply as in the classical tensor product."""
        a = FgAbelianGroup.free(1) if m == 0 else FgAbelianGroup.cyclic(m)
        b = FgAbelianGroup.free(1) if n == 0 else FgAbelianGroup.cyclic(n)
        for strategy in ("auto", "presented"):
            res = tensor(from_abelian(a), from_abelian(b), strategy=strategy).result
            assert str(res.e.abelianization.group) == expected
            assert res.ee.is_trivial()

    def test_generator_names(self, z_nil, atensor_z2):
        """Generators are named x@y and ee_i#ee_j."""
        names = tensor(z_nil, atensor_z2, strategy="presented").generators
        assert "ee0#ee0" in names
        assert any("@" in name for name in names)


class TestRelations:
    """Tests for the defining and derived relations."""

    def test_defining_relations(self, pair):
        """The defining relations hold on generators."""
        assert tensor_relations_report(tensor(*pair)).ok

    def test_derived_identities(self, pair):
        """Identities derived from the relations hold."""
        report = derived_identities_report(tensor(*pair))
        assert report.ok, report.first_failure()

    def test_left_linear(self, pair):
        """The left-linear symbols satisfy their relations."""
        assert left_linear_report(tensor(*pair)).ok
        assert tr_product(*pair) is tensor(*pair)

    def test_symmetric(self, pair):
        """The symmetric presentation holds."""
        assert symmetric_report(tensor(*pair)).ok
        assert odot_product(*pair) is tensor(*pair)

    def test_reduce(self, atensor_z2, z_q):
        """Formal sums reduce to the same element as direct evaluation."""
        tp = tensor(atensor_z2, z_q)
        x, y = tp.xs[0], tp.ys[0]
        a, b = atensor_z2.ee.gen(0), z_q.ee.gen(0)
        expected = tp.odot(x, y) + tp.odot(x, y) + tp.bar(a, b)
        assert tp.reduce([Odot(x, y, 2), Bar(a, b)]) == expected


class TestStructureMaps:
    """Tests for functoriality, units and symmetry."""

    def test_structure_isomorphisms(self, pair):
        """Units and tau are inverse to their partners."""
        assert structure_report(tensor(*pair)).ok

    def test_unit_needs_znil(self, atensor_z2):
        """iota is only defined with Z_nil on the left."""
        with pytest.raises(ValidationError, match="must be Z_nil"):
            unit_left(tensor(atensor_z2, atensor_z2))

    def test_tau_involution(self, atensor_z2, z_q):
        """tau o tau is the identity."""
        tp, rev = tensor(atensor_z2, z_q), tensor(z_q, atensor_z2)
        twice = symmetry(rev, tp).compose(symmetry(tp, rev))
        assert twice.equals(SgMorphism.identity(tp.result))

    def test_functor_preserves_identity(self, atensor_z2, z_q):
        """Id (.) Id is the identity."""
        f = tensor_morphism(SgMorphism.identity(atensor_z2), SgMorphism.identity(z_q))
        assert f.equals(SgMorphism.identity(tensor(atensor_z2, z_q).result))

    def test_naturality(self, atensor_z2, z_q):
        """tau is natural in both arguments."""
        f = SgMorphism.identity(atensor_z2)
        g = SgMorphism.zero(z_q, z_q)
        assert naturality_report(f, g).ok

    def test_mismatched_tensor(self, atensor_z2, z_q):
        """Explicit products must match the morphisms."""
        with pytest.raises(ValueError, match="source tensor product"):
            tensor_morphism(
                SgMorphism.identity(atensor_z2),
                SgMorphism.identity(z_q),
                source=tensor(z_q, atensor_z2),
            )


class TestBilinear:
    """Tests for bilinear maps and the universal property."""

    def test_universal_map(self, pair):
        """The universal bilinear map satisfies every law."""
        assert bilinear_report(universal(tensor(*pair))).ok

    def test_factorization(self, pair):
        """un factors as the identity and the twisted map as tau."""
        assert factorization_report(tensor(*pair)).ok

    def test_zero_map(self, atensor_z2, z_q):
        """The zero bilinear map factors through the zero morphism."""
        phi = zero_bilinear(atensor_z2, z_q, z_q)
        assert bilinear_factorize(phi).is_zero()

    def test_broken_map_rejected(self, z_nil):
        """A map that is not additive in y does not factor."""
        tp = tensor(z_nil, z_nil)
        one = tp.result.e.gen(0)

        phi = BilinearMap(
            z_nil, z_nil, tp.result,
            lambda x, y: one,
            lambda x, y: one,
            lambda a, b: tp.result.ee.zero(),
        )
        assert not bilinear_report(phi).ok
        with pytest.raises(ValidationError):
            bilinear_factorize(phi, tp)

    def test_then(self, atensor_z2, z_q):
        """Composing with a morphism moves the target."""
        tp = tensor(atensor_z2, z_q)
        zero = SgMorphism.zero(tp.result, z_q)
        composed = universal(tp).then(zero)
        assert composed.target is z_q
        with pytest.raises(ValueError, match="does not start at the target"):
            universal(tp).then(SgMorphism.identity(z_q))
