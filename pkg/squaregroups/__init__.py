"""squaregroups: exact computations with square groups.

A square group is a diagram ``M_e --H--> M_ee --P--> M_e`` of a nil2-group
and an abelian group. The package builds the standard examples, computes
their symmetric monoidal tensor product and the composition product, and
verifies every law it relies on with explicit, exact checks.
"""

__version__ = "0.1.0"

from .checks import CheckReport, CheckResult, CheckStatus
from .config import RunConfig, VerificationConfig
from .zalgebra import FgAbelianGroup, FgabHom
from .nil2 import Nil2Datum, Nil2Element, QuadraticMap
from .sqcore import SgMorphism, SquareGroup, validate_square_group
from .constructors import a_tensor, e_involution, free_sq, from_abelian, v_free, znil, znil_set, zq
from .tensor import tensor
from .boxcomp import box, sigma
from .qrings import QuadraticRing, SquareRing, validate_qring, validate_sqring
from .homotopy import spectrum_homotopy, tor1_atensor
from .cosym import CosymmetryObject, J, Psi
from .document import SqDocument, emit_document, parse_document
from .report import emit_report

__all__ = [
    "CheckReport",
    "CheckResult",
    "CheckStatus",
    "RunConfig",
    "VerificationConfig",
    "FgAbelianGroup",
    "FgabHom",
    "Nil2Datum",
    "Nil2Element",
    "QuadraticMap",
    "SgMorphism",
    "SquareGroup",
    "validate_square_group",
    "a_tensor",
    "e_involution",
    "free_sq",
    "from_abelian",
    "v_free",
    "znil",
    "znil_set",
    "zq",
    "tensor",
    "box",
    "sigma",
    "QuadraticRing",
    "SquareRing",
    "validate_qring",
    "validate_sqring",
    "spectrum_homotopy",
    "tor1_atensor",
    "CosymmetryObject",
    "J",
    "Psi",
    "SqDocument",
    "emit_document",
    "parse_document",
    "emit_report",
]
