"""Tests for nilpotence-class-two groups and quadratic maps."""

import pytest

from squaregroups.nil2 import (
    FreeNil2Group,
    Nil2Datum,
    Nil2Hom,
    QuadraticMap,
    nf_reduce,
    nil2_commutator,
    nil2_hom,
    nil2_inv,
    nil2_mul,
    quad_descends,
    quad_extend,
    validate_nil2,
)
from squaregroups.utils import ValidationError
from squaregroups.zalgebra import FgAbelianGroup


@pytest.fixture
def free_xy():
    return FreeNil2Group(("x", "y"))


class TestNil2Datum:
    """Tests for Nil2Datum arithmetic."""

    def test_free_datum_shape(self, free_xy):
        """The free group on two letters has one central commutator."""
        d = free_xy.datum
        assert d.n == 2
        assert d.central.invariants == (0,)
        assert d.word_names() == ["x", "y", "[x,y]"]
        assert not d.is_abelian()
        assert d.order() is None
        assert validate_nil2(d).ok

    def test_commutator_convention(self, free_xy):
        """[x, y] = -x - y + x + y is the central generator."""
        d = free_xy.datum
        x, y = d.gen(0), d.gen(1)
        assert nil2_commutator(x, y) == -x - y + x + y
        assert nil2_commutator(x, y) == d.central_element((1,))
        assert nil2_commutator(y, x) == -nil2_commutator(x, y)

    def test_reordering(self, free_xy):
        """y + x = x + y - [x, y]."""
        d = free_xy.datum
        x, y = d.gen(0), d.gen(1)
        assert nil2_mul(y, x) == x + y - nil2_commutator(x, y)
        assert nil2_mul(x, nil2_inv(x)).is_zero()

    def test_distinct_names_required(self):
        """Generator names must be distinct."""
        with pytest.raises(ValueError, match="must be distinct"):
            Nil2Datum(["a", "a"])

    def test_element_length_checked(self, free_xy):
        """Elements need one lattice coordinate per generator."""
        with pytest.raises(ValueError, match="lattice coordinates"):
            free_xy.datum.element([1, 2, 3])

    def test_cross_datum_arithmetic_rejected(self, free_xy):
        """Elements of different data cannot be added."""
        other = Nil2Datum.free(["x", "y"])
        with pytest.raises(ValueError, match="different nil2 datum"):
            nil2_mul(free_xy.datum.gen(0), other.gen(0))

    def test_abelian_cyclic(self):
        """Z/6 as a datum is abelian with six elements."""
        d = Nil2Datum.abelian(FgAbelianGroup.cyclic(6), ["a"])
        assert d.is_abelian()
        assert d.is_finite()
        assert d.order() == 6
        assert len(list(d.elements())) == 6
        assert (6 * d.gen(0)).is_zero()

    def test_infinite_enumeration_rejected(self, free_xy):
        """Infinite data cannot be enumerated."""
        with pytest.raises(ValueError, match="infinite nil2 group"):
            list(free_xy.datum.elements())

    def test_abelianization_of_free(self, free_xy):
        """The abelianization of the free group on two letters is Z^2."""
        ab = free_xy.datum.abelianization
        assert ab.group.invariants == (0, 0)
        assert ab(free_xy.element(["x", "x", "y"])) == ab.group.from_gens([2, 1, 0])


class TestQuotients:
    """Tests for quotient_by."""

    def test_killing_the_commutator(self, free_xy):
        """Free nil2 modulo [x, y] is abelian of rank two."""
        d = free_xy.datum
        q = d.quotient_by([nil2_commutator(d.gen(0), d.gen(1))])
        assert q.datum.is_abelian()
        assert q.datum.central.is_trivial()
        assert q.datum.abelianization.group.invariants == (0, 0)

    def test_order_eight_quotient(self, free_xy):
        """Killing 2x and 2y leaves a non-abelian group of order eight."""
        d = free_xy.datum
        x, y = d.gen(0), d.gen(1)
        q = d.quotient_by([2 * x, 2 * y])
        assert q.datum.order() == 8
        assert not q.datum.is_abelian()
        assert validate_nil2(q.datum).ok

    def test_projection_is_surjective(self, free_xy):
        """The quotient projection is onto."""
        d = free_xy.datum
        q = d.quotient_by([3 * d.gen(0)])
        assert q.projection.is_surjective()
        for s in q.section:
            assert s.owner is d


class TestValidateNil2:
    """Tests for the consistency checks of a datum."""

    def test_check_names(self, free_xy):
        """A valid datum passes CN1, CN2 and CN3 in order."""
        d = free_xy.datum
        q = d.quotient_by([2 * d.gen(0), 2 * d.gen(1)]).datum
        report = validate_nil2(q)
        assert [r.name for r in report.results] == ["nil2.cn1", "nil2.cn2", "nil2.cn3"]
        assert report.ok

    def test_commutator_disagrees_with_pairing(self):
        """Killing a non-central generator breaks CN1 and CN3."""
        d = Nil2Datum(
            ["x", "y"],
            FgAbelianGroup.free(1),
            [[[0], [0]], [[-1], [0]]],
            relations=[((1, 0), (0,))],
        )
        report = validate_nil2(d)
        failed = [r.name for r in report.failures]
        assert failed == ["nil2.cn1", "nil2.cn3"]
        assert report.failures[1].witness.startswith("('x', 'y'")


class TestNil2Hom:
    """Tests for homomorphisms of nil2 data."""

    def test_identity_composes(self, free_xy):
        """id o id = id."""
        ident = Nil2Hom.identity(free_xy.datum)
        assert ident.compose(ident).equals(ident)
        assert ident.is_iso()

    def test_relator_violation(self):
        """Z/2 -> Z/4 cannot send the generator to a generator."""
        src = Nil2Datum.abelian(FgAbelianGroup.cyclic(2), ["a"])
        tgt = Nil2Datum.abelian(FgAbelianGroup.cyclic(4), ["b"])
        with pytest.raises(ValidationError) as excinfo:
            nil2_hom([tgt.gen(0)], src, tgt)
        assert excinfo.value.check == "nil2_hom.relator"

    def test_doubling_inclusion(self):
        """Z/2 -> Z/4, a -> 2b, is injective but not surjective."""
        src = Nil2Datum.abelian(FgAbelianGroup.cyclic(2), ["a"])
        tgt = Nil2Datum.abelian(FgAbelianGroup.cyclic(4), ["b"])
        f = nil2_hom([2 * tgt.gen(0)], src, tgt)
        assert f.is_injective()
        assert not f.is_surjective()
        assert f.preimage(tgt.gen(0)) is None
        assert f.preimage(2 * tgt.gen(0)) == src.gen(0)

    def test_automorphism_inverse(self):
        """Doubling on Z/5 is invertible."""
        d = Nil2Datum.abelian(FgAbelianGroup.cyclic(5), ["a"])
        f = nil2_hom([2 * d.gen(0)], d, d)
        g = f.inverse()
        assert g.compose(f).equals(Nil2Hom.identity(d))

    def test_zero_map_mismatch(self, free_xy):
        """The zero map differs from the identity on the first generator."""
        d = free_xy.datum
        problem = Nil2Hom.zero(d, d).mismatch(Nil2Hom.identity(d))
        assert problem is not None
        assert problem.startswith("x:")


class TestQuadraticMap:
    """Tests for quadratic maps."""

    def test_binomial_map(self):
        """n x -> C(n, 2) has cross-effect 1 on (x, x)."""
        g = FreeNil2Group(("x",))
        z = FgAbelianGroup.free(1)
        f = QuadraticMap(g.datum, z, [[0]], [[[1]]])
        x = g.datum.gen(0)
        assert f(3 * x) == (3,)
        assert f.cross_effect(x, x) == (1,)
        assert f.descends()

    def test_descent_failure(self):
        """C(n, 2) is not well defined on Z/2."""
        d = Nil2Datum.abelian(FgAbelianGroup.cyclic(2), ["a"])
        f = QuadraticMap(d, FgAbelianGroup.free(1), [[0]], [[[1]]])
        report = f.descent_report()
        assert not report.ok
        assert report.first_failure().name == "quad.relator"

    def test_quad_descends(self):
        """The zero map descends to Z/2; C(n, 2) does not."""
        g = FreeNil2Group(("x",))
        z = FgAbelianGroup.free(1)
        relator = 2 * g.datum.gen(0)
        ok, witness, induced = quad_descends(QuadraticMap(g.datum, z, [[0]], [[[0]]]), [relator])
        assert ok and witness is None
        assert induced.source.abelianization.group.order() == 2
        ok, witness, induced = quad_descends(QuadraticMap(g.datum, z, [[0]], [[[1]]]), [relator])
        assert not ok
        assert "relator 0" in witness
        assert induced is None

    def test_quad_extend_commutator_value(self, free_xy):
        """The extension takes phi(x, y) - phi(y, x) on [x, y]."""
        z = FgAbelianGroup.free(1)
        phi = [[[0], [2]], [[0], [0]]]
        f = quad_extend([[1], [0]], phi, free_xy, z)
        d = free_xy.datum
        assert f(d.gen(0)) == (1,)
        assert f(nil2_commutator(d.gen(0), d.gen(1))) == (2,)
        assert f.cross_effect(d.gen(0), d.gen(1)) == (2,)

    def test_zero_map(self, free_xy):
        """The zero map is zero everywhere."""
        f = QuadraticMap.zero(free_xy.datum, FgAbelianGroup.cyclic(3))
        assert f(free_xy.element(["x", "y", "-x"])) == (0,)


class TestNormalForms:
    """Tests for word collection in free nil2 groups."""

    def test_commutator_word(self, free_xy):
        """x + y - x - y collects to [x, y]."""
        nf = nf_reduce(["x", "y", "-x", "-y"], free_xy)
        assert nf.linear == ()
        assert nf.commutators == ((("x", "y"), 1),)
        assert str(nf) == "[x,y]"

    def test_reversed_word(self, free_xy):
        """y + x collects to x + y - [x, y]."""
        assert str(nf_reduce(["y", "x"], free_xy)) == "x+y-[x,y]"

    def test_powers(self, free_xy):
        """Letters with exponents collect additively."""
        nf = nf_reduce([("x", 2), ("x", 3)], free_xy)
        assert nf.linear == (("x", 5),)

    def test_unknown_letter(self, free_xy):
        """Letters must be generators."""
        with pytest.raises(ValueError, match="unknown generator 'z'"):
            nf_reduce(["z"], free_xy)
