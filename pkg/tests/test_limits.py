"""Tests for kernels, quotients, coproducts and Hom-sets."""

import pytest

from squaregroups.constructors import a_tensor, a_tensor_map, znil
from squaregroups.limits import (
    SubSquareGroup,
    centralizer_refinement,
    cokernel,
    coproduct,
    enumerate_homs,
    epi_report,
    hom_count_checks,
    is_epi,
    is_normal,
    kernel,
    quotient,
)
from squaregroups.sqcore import SgMorphism, validate_square_group
from squaregroups.suite import cyclic_sequence
from squaregroups.utils import UnsupportedInstanceError, ValidationError
from squaregroups.zalgebra import FgAbelianGroup, FgabHom


@pytest.fixture
def doubling(atensor_z):
    """Multiplication by two on Z^(x)."""
    return a_tensor_map(FgabHom.identity(FgAbelianGroup.free(1)).scaled(2), atensor_z, atensor_z)


class TestKernelsAndCokernels:
    """Tests for kernel and cokernel."""

    def test_kernel_of_identity(self, z_nil):
        """The identity has zero kernel."""
        square, incl = kernel(SgMorphism.identity(z_nil))
        assert square.is_zero()
        assert incl.target is z_nil

    def test_cokernel_of_identity(self, z_nil):
        """The identity has zero cokernel and is an epimorphism."""
        ident = SgMorphism.identity(z_nil)
        assert cokernel(ident).square.is_zero()
        assert epi_report(ident).ok

    def test_cokernel_of_zero(self, z_nil):
        """The cokernel of the zero map is the target."""
        coker = cokernel(SgMorphism.zero(z_nil, z_nil)).square
        assert coker.ee.invariants == (0,)
        assert coker.e.abelianization.group.invariants == (0,)

    def test_cokernel_of_doubling(self, doubling):
        """Z^(x) modulo doubling is (Z/2)^(x) levelwise."""
        coker = cokernel(doubling).square
        assert coker.e.order() == 2
        assert coker.ee.order() == 4
        assert not is_epi(doubling)
        assert epi_report(doubling).ok

    def test_kernel_of_doubling(self, doubling):
        """Doubling on Z^(x) is injective."""
        square, _ = kernel(doubling)
        assert square.is_zero()


class TestCentralizerRefinement:
    """Tests for the central part of a short exact sequence."""

    def test_abelian_sequence(self):
        """In an abelian extension all of A is central."""
        i, p = cyclic_sequence(2)
        result = centralizer_refinement(i, p)
        assert result.report.ok, result.report.first_failure()
        assert result.report.summary["refined.e"] == "Z"
        assert result.report.summary["refined.ee"] == "Z + Z"
        assert result.a_quotient.square.is_zero()

    def test_needs_short_exact(self):
        """A sequence that is not exact is rejected."""
        i, p = cyclic_sequence(2)
        with pytest.raises(ValidationError):
            centralizer_refinement(SgMorphism.zero(i.source, i.target), p)


class TestQuotients:
    """Tests for sub-square groups and quotients."""

    def test_non_normal_rejected(self, atensor_z2):
        """K_ee = <(1, 0)> with K_e = 0 is not closed under P."""
        sub = SubSquareGroup(atensor_z2, [], [(1, 0)])
        assert not is_normal(sub).ok
        with pytest.raises(ValidationError) as excinfo:
            quotient(sub)
        assert excinfo.value.check == "sub.p"

    def test_quotient_by_everything(self, atensor_z2):
        """Killing both levels gives the zero square group."""
        e = atensor_z2.e
        sub = SubSquareGroup(atensor_z2, [e.gen(0)], [(1, 0), (0, 1)])
        assert is_normal(sub).ok
        result = quotient(sub)
        assert result.square.is_zero()
        assert validate_square_group(result.square).ok


class TestCoproduct:
    """Tests for the coproduct."""

    def test_znil_coproduct(self):
        """Z_nil v Z_nil has ee = Z + Z + (Z (x) Z) + (Z (x) Z)."""
        cop = coproduct(znil(), znil())
        assert cop.square.ee.invariants == (0, 0, 0, 0)
        assert validate_square_group(cop.square).ok

    def test_sequence_is_exact(self, z_nil, abelian_z2):
        """0 -> (CM (x) CN)^(x) -> M v N -> M x N -> 0 is exact."""
        cop = coproduct(z_nil, abelian_z2)
        report = cop.sequence_report()
        assert report.ok
        assert report.summary["kernel"] == "Z/2"

    def test_comparison_map_is_epi(self, z_nil, atensor_z):
        """M v N -> M x N is onto."""
        _, to_product = coproduct(z_nil, atensor_z).to_product()
        assert is_epi(to_product)


class TestHomSets:
    """Tests for Hom enumeration."""

    def test_hom_counts_abelian(self, abelian_z2, sample_verification_config):
        """The Hom bijections hold on Z/2."""
        report = hom_count_checks(abelian_z2, sample_verification_config)
        assert report.ok
        assert report.summary["hom.zq"] == "2"
        assert report.summary["hom.linear"] == "2"

    def test_hom_counts_atensor(self, atensor_z2, sample_verification_config):
        """The Hom bijections hold on (Z/2)^(x)."""
        assert hom_count_checks(atensor_z2, sample_verification_config).ok

    def test_infinite_target_rejected(self, z_nil):
        """Hom counting needs a finite square group."""
        with pytest.raises(UnsupportedInstanceError, match="infinite"):
            hom_count_checks(z_nil)

    def test_limit_enforced(self, atensor_z2):
        """The candidate space is bounded."""
        with pytest.raises(UnsupportedInstanceError, match="above the limit"):
            list(enumerate_homs(a_tensor(FgAbelianGroup.cyclic(2)), atensor_z2, limit=2))

    def test_homs_into_zero(self, atensor_z2):
        """There is exactly one morphism into the zero square group."""
        zero = a_tensor(FgAbelianGroup.trivial())
        assert len(list(enumerate_homs(atensor_z2, zero))) == 1
