"""Named fixtures shared by the document resolver, the CLI and the suite."""

from typing import Callable, Dict, List

from .constructors import (
    a_tensor,
    e_involution,
    from_abelian,
    involution_by_name,
    v_free,
    znil,
    znil_set,
    zq,
)
from .cosym import CosymmetryObject, J, cos_free, cos_unit, cosymmetry
from .qrings import FiniteMonoid, QuadraticRing, monoid_ring, znil_ring
from .sqcore import SquareGroup
from .utils import UnresolvedReferenceError, setup_logger, shared_cache
from .zalgebra import FgAbelianGroup


logger = setup_logger(__name__)


def _involution(group: FgAbelianGroup, name: str) -> SquareGroup:
    lattice, tau = involution_by_name(group, name)
    return e_involution(lattice, tau, label=f"E({group}, {name})")


SQUARES: Dict[str, Callable[[], SquareGroup]] = {
    "znil": znil,
    "znil_s": lambda: znil_set(["s"]),
    "znil_st": lambda: znil_set(["s", "t"]),
    "znil_stu": lambda: znil_set(["s", "t", "u"]),
    "atensor_z": lambda: a_tensor(FgAbelianGroup.free(1)),
    "atensor_z2": lambda: a_tensor(FgAbelianGroup.cyclic(2)),
    "atensor_z4": lambda: a_tensor(FgAbelianGroup.cyclic(4)),
    "atensor_z2z3": lambda: a_tensor(FgAbelianGroup.diagonal([2, 3])),
    "zq": zq,
    "vfree_s": lambda: v_free(["s"]),
    "vfree_st": lambda: v_free(["s", "t"]),
    "e_neg_z": lambda: _involution(FgAbelianGroup.free(1), "neg"),
    "e_id_z": lambda: _involution(FgAbelianGroup.free(1), "id"),
    "e_swap_z": lambda: _involution(FgAbelianGroup.free(1), "swap"),
    "abelian_z": lambda: from_abelian(FgAbelianGroup.free(1)),
    "abelian_z2": lambda: from_abelian(FgAbelianGroup.cyclic(2)),
    "j_z3": lambda: J(cosymmetry(FgAbelianGroup.cyclic(3)), label="J(Z/3, 0)"),
}

# Objects whose cross-effect Coker(P) (x) Coker(P) -> M_ee is an isomorphism.
SG_SIGMA = ("znil", "znil_s", "znil_st", "j_z3")

# Small enough for the elementwise and coherence checks of the suite.
SMALL = ("znil", "znil_s", "atensor_z", "atensor_z2", "zq", "e_neg_z", "abelian_z2")

RINGS: Dict[str, Callable[[], QuadraticRing]] = {
    "znil_ring": znil_ring,
    "z_trivial_monoid": lambda: monoid_ring(FiniteMonoid.trivial()),
    "z_c2": lambda: monoid_ring(FiniteMonoid.cyclic_group(2)),
}

COSYMMETRIES: Dict[str, Callable[[], CosymmetryObject]] = {
    "unit": cos_unit,
    "free_s": lambda: cos_free(["s"]),
    "free_st": lambda: cos_free(["s", "t"]),
    "z3": lambda: cosymmetry(FgAbelianGroup.cyclic(3), label="(Z/3, 0)"),
}


@shared_cache
def square(name: str) -> SquareGroup:
    """Registry square group by name.

    Raises:
        UnresolvedReferenceError: For an unknown name
    """
    if name not in SQUARES:
        raise UnresolvedReferenceError(name)
    logger.debug(f"building registry object {name}")
    return SQUARES[name]()


@shared_cache
def ring(name: str) -> QuadraticRing:
    if name not in RINGS:
        raise UnresolvedReferenceError(name)
    return RINGS[name]()


@shared_cache
def cosymmetry_object(name: str) -> CosymmetryObject:
    if name not in COSYMMETRIES:
        raise UnresolvedReferenceError(name)
    return COSYMMETRIES[name]()


def square_names() -> List[str]:
    return sorted(SQUARES)


def build_all() -> None:
    """Build every registry object ahead of a worker pool."""
    for name in sorted(SQUARES):
        square(name)
    for name in sorted(RINGS):
        ring(name)
    for name in sorted(COSYMMETRIES):
        cosymmetry_object(name)
