"""Tests for the named fixtures."""

from concurrent.futures import ThreadPoolExecutor

import pytest

from squaregroups import registry
from squaregroups.sqcore import validate_square_group
from squaregroups.utils import UnresolvedReferenceError


class TestRegistry:
    """Tests for registry lookups."""

    def test_names_sorted(self):
        """square_names() is sorted and covers every factory."""
        names = registry.square_names()
        assert names == sorted(names)
        assert set(names) == set(registry.SQUARES)

    def test_groups_are_subsets(self):
        """The named subsets refer to registry squares."""
        assert set(registry.SMALL) <= set(registry.SQUARES)
        assert set(registry.SG_SIGMA) <= set(registry.SQUARES)

    def test_square_cached(self):
        """Repeated lookups return the same object."""
        assert registry.square("znil") is registry.square("znil")

    def test_unknown_square(self):
        """Unknown names raise UnresolvedReferenceError."""
        with pytest.raises(UnresolvedReferenceError, match="unresolved reference 'nope'"):
            registry.square("nope")

    def test_unknown_ring_and_cosymmetry(self):
        """Rings and cosymmetry objects have their own namespaces."""
        with pytest.raises(UnresolvedReferenceError):
            registry.ring("znil")
        with pytest.raises(UnresolvedReferenceError):
            registry.cosymmetry_object("znil")

    def test_ring_and_cosymmetry(self):
        """Known rings and cosymmetry objects resolve."""
        assert registry.ring("znil_ring") is registry.ring("znil_ring")
        assert registry.cosymmetry_object("unit") is not None

    @pytest.mark.slow
    @pytest.mark.parametrize("name", registry.square_names())
    def test_every_square_validates(self, name):
        """Every registry square satisfies the axioms."""
        assert validate_square_group(registry.square(name)).ok

    def test_square_shared_across_threads(self):
        """Concurrent first lookups all get one object."""
        registry.square.cache_clear()
        with ThreadPoolExecutor(max_workers=4) as pool:
            built = list(pool.map(lambda _: registry.square("znil_st"), range(8)))
        assert all(m is built[0] for m in built)

    def test_build_all(self):
        """build_all fills the caches for every namespace."""
        registry.build_all()
        assert registry.square.cache_info().currsize == len(registry.SQUARES)
        assert registry.ring.cache_info().currsize == len(registry.RINGS)
