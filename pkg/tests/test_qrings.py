"""Tests for quadratic rings, square rings and psi."""

import pytest

from squaregroups.qrings import (
    FiniteMonoid,
    QuadraticRing,
    coker_adjunction_report,
    coker_ring,
    commutativity_report,
    find_commutative_qrings,
    is_commutative_qring,
    linear_elements,
    monoid_adjunction_report,
    monoid_ring,
    psi,
    psi_report,
    qr_to_sr,
    regular_module,
    ring_morphism_report,
    validate_qmodule,
    validate_qring,
    validate_sqring,
    znil_ring,
)
from squaregroups.sqcore import SgMorphism
from squaregroups.utils import UnsupportedInstanceError, ValidationError


@pytest.fixture
def left_zero():
    """{e, a, b} with x * y = x on {a, b}; not commutative."""
    return FiniteMonoid.from_rules(
        ["e", "a", "b"],
        {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"},
    )


class TestFiniteMonoid:
    """Tests for multiplication tables."""

    def test_cyclic_group(self):
        """C_3 is commutative with unit 1."""
        c3 = FiniteMonoid.cyclic_group(3)
        assert len(c3) == 3
        assert c3.mul(1, 2) == 0
        assert c3.is_commutative()

    def test_left_zero(self, left_zero):
        """The left-zero monoid is associative but not commutative."""
        assert not left_zero.is_commutative()

    def test_missing_product(self):
        """Every product of non-unit elements is required."""
        with pytest.raises(ValueError, match="product t\\*t is not given"):
            FiniteMonoid.from_rules(["e", "t"], {})

    def test_unknown_product(self):
        """Products must name elements."""
        with pytest.raises(ValueError, match="is not an element"):
            FiniteMonoid.from_rules(["e", "t"], {("t", "t"): "u"})

    def test_not_associative(self):
        """Associativity is checked on all triples."""
        # a*a = b, a*b = a, b*a = b, b*b = a: (a*a)*a = b*a = b but a*(a*a) = a*b = a
        with pytest.raises(ValidationError, match="not associative"):
            FiniteMonoid.from_rules(
                ["e", "a", "b"],
                {("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "a"},
            )

    def test_duplicate_names(self):
        """Element names are distinct."""
        with pytest.raises(ValueError, match="must be distinct"):
            FiniteMonoid(("e", "e"), ((0, 1), (1, 1)))


class TestQuadraticRings:
    """Tests for the ring axioms."""

    @pytest.mark.parametrize("ring", [
        znil_ring,
        lambda: monoid_ring(FiniteMonoid.trivial()),
        lambda: monoid_ring(FiniteMonoid.cyclic_group(2)),
    ])
    def test_rings_validate(self, ring):
        """Built rings satisfy the quadratic ring axioms and U(R) is a square ring."""
        r = ring()
        assert validate_qring(r).ok
        assert validate_sqring(qr_to_sr(r)).ok
        assert is_commutative_qring(r)

    def test_noncommutative_monoid_ring(self, left_zero):
        """Z_nil[M] of a noncommutative monoid is a noncommutative ring."""
        r = monoid_ring(left_zero)
        assert validate_qring(r).ok
        assert not commutativity_report(r).ok
        with pytest.raises(ValidationError):
            psi(r)

    def test_table_shape(self):
        """Product tables must match the generators."""
        base = znil_ring()
        with pytest.raises(ValueError, match="e-level product table"):
            QuadraticRing(base.square, [], [[(1,)]], base.one)

    def test_identity_is_ring_map(self):
        """The identity is a ring morphism."""
        r = znil_ring()
        assert ring_morphism_report(SgMorphism.identity(r.square), r, r).ok

    def test_regular_module(self):
        """R is a right module over itself."""
        assert validate_qmodule(regular_module(znil_ring())).ok


class TestPsi:
    """Tests for psi: Coker(P) -> Ker(P)."""

    def test_znil_values(self):
        """On Z_nil, psi(1) = 0 and psi(2) is the generator of Z/2."""
        f = psi(znil_ring())
        assert str(f.codomain) == "Z/2"
        assert list(f([1])) == [0]
        assert list(f([2])) == [1]

    @pytest.mark.parametrize("ring", [znil_ring, lambda: monoid_ring(FiniteMonoid.cyclic_group(2))])
    def test_laws(self, ring):
        """psi is well defined and satisfies its sum and product laws."""
        report = psi_report(ring())
        assert report.ok, report.first_failure()


class TestAdjunctions:
    """Tests for Z_nil[-] -| L and the Coker(P) reflection."""

    def test_linear_elements(self):
        """H vanishes on 0 and 1 in Z_nil."""
        r = znil_ring()
        assert linear_elements(r, bound=1) == [r.square.e.zero(), r.one]

    def test_monoid_adjunction(self):
        """Ring maps Z_nil[C_2] -> Z_nil are the monoid maps C_2 -> (Z, *)."""
        report = monoid_adjunction_report(FiniteMonoid.cyclic_group(2), znil_ring(), bound=1)
        assert report.ok, report.first_failure()
        assert report.summary["adjunction.monoid_homs"] == "1"

    def test_coker_reflection(self):
        """R -> Coker(P_R) is a surjective ring map."""
        assert coker_adjunction_report(znil_ring()).ok
        assert str(coker_ring(znil_ring()).square.e.abelianization.group) == "Z"

    def test_coker_factor_skipped(self):
        """A target with nonzero ee-level is skipped."""
        report = coker_adjunction_report(znil_ring(), znil_ring())
        assert [r.name for r in report.skipped] == ["coker_ring.factor"]


class TestRingSearch:
    """Tests for the exploration utility."""

    def test_finds_znil(self, z_nil):
        """Z_nil carries commutative ring structures, among them 1 * 1 = 1."""
        found = find_commutative_qrings(z_nil, bound=1)
        assert found
        assert all(is_commutative_qring(r) for r in found)

    def test_too_large(self, znil_st):
        """Only one word generator is supported."""
        with pytest.raises(UnsupportedInstanceError, match="one e-generator"):
            find_commutative_qrings(znil_st)
