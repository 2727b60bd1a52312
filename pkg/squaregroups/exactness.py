"""Exactness properties of the tensor product.

``M (.) -`` preserves finite products, is right exact, and is exact when
``M`` is projective. The tensor with a coproduct sits in a short exact
sequence whose kernel is ``(M_ee (x) Coker P^A (x) Coker P^B)^(x)``.
"""

from typing import Optional

from .checks import CheckReport
from .constructors import a_tensor, free_cover
from .limits import check_short_exact, cokernel, coproduct, induced_from_quotient, kernel
from .sqcore import SgMorphism, SquareGroup, product
from .tensor import tensor, tensor_morphism
from .utils import setup_logger
from .zalgebra import FgabTensor


logger = setup_logger(__name__)


PROJECTIVE_KINDS = ("free", "vfree", "zq")


def is_free_shape(a: SquareGroup) -> bool:
    """Recognize the free square groups ``V(S) x (Z[T])^(x)`` among constructor outputs."""
    if a.kind in PROJECTIVE_KINDS:
        return True
    return a.kind == "atensor" and a.params["group"].free_rank == a.params["group"].rank


def left_map(m: SquareGroup, f: SgMorphism) -> SgMorphism:
    """``Id_M (.) f``."""
    return tensor_morphism(SgMorphism.identity(m), f, tensor(m, f.source), tensor(m, f.target))


def right_map(f: SgMorphism, n: SquareGroup) -> SgMorphism:
    """``f (.) Id_N``."""
    return tensor_morphism(f, SgMorphism.identity(n), tensor(f.source, n), tensor(f.target, n))


def product_comparison(m: SquareGroup, b: SquareGroup, c: SquareGroup) -> SgMorphism:
    """``M (.) (B x C) -> (M (.) B) x (M (.) C)`` with components ``Id (.) pr``."""
    bc = product(b, c)
    legs = [left_map(m, pr) for pr in bc.projections]
    target = product(legs[0].target, legs[1].target)
    return target.induced(legs[0], legs[1])


def product_preservation_report(m: SquareGroup, b: SquareGroup, c: SquareGroup) -> CheckReport:
    """The comparison map onto the product of tensor products is an isomorphism."""
    report = CheckReport(title=f"{m.label} (.) - preserves {b.label} x {c.label}")
    phi = product_comparison(m, b, c)
    report.add("product.iso_e", phi.fe.is_iso(), None if phi.fe.is_iso() else str(phi.source.e))
    report.add("product.iso_ee", phi.fee.is_iso(), None if phi.fee.is_iso() else str(phi.source.ee))
    report.summary["source.ee"] = str(phi.source.ee)
    report.summary["target.ee"] = str(phi.target.ee)
    return report


def right_exactness_report(m: SquareGroup, i: SgMorphism, p: SgMorphism) -> CheckReport:
    """``M (.) B1 -> M (.) B -> M (.) B2 -> 0`` is exact for ``0 -> B1 -> B -> B2 -> 0``.

    Exactness means ``Id (.) p`` is onto and induces an isomorphism from the
    cokernel of ``Id (.) i``.
    """
    report = CheckReport(title=f"right exactness of {m.label} (.) -")
    report.merge(check_short_exact(i, p), prefix="input.")
    if not report.ok:
        return report
    mi, mp = left_map(m, i), left_map(m, p)
    report.add("right_exact.composite", mp.compose(mi).is_zero())
    report.add("right_exact.epi", mp.is_epi())
    coker = cokernel(mi)
    induced = induced_from_quotient(mp, coker)
    report.add("right_exact.cokernel", induced.is_iso(), None if induced.is_iso() else coker.square.label)
    report.summary["cokernel.ee"] = str(coker.square.ee)
    report.summary["quotient.ee"] = str(mp.target.ee)
    return report


def mono_report(a: SquareGroup, mu: SgMorphism) -> CheckReport:
    """``A (.) mu`` is a monomorphism for projective ``A`` and injective ``mu``."""
    report = CheckReport(title=f"{a.label} (.) mu")
    if not is_free_shape(a):
        report.skip("mono.projective", f"{a.label} is not recognized as projective")
        return report
    report.add("mono.input", mu.fe.is_injective() and mu.fee.is_injective())
    f = left_map(a, mu)
    report.add("mono.e", f.fe.is_injective())
    report.add("mono.ee", f.fee.is_injective())
    return report


def coproduct_sequence_report(m: SquareGroup, a: SquareGroup, b: SquareGroup) -> CheckReport:
    """``0 -> (M_ee (x) CA (x) CB)^(x) -> M (.) (A v B) -> (M (.) A) x (M (.) B) -> 0``.

    The kernel term is ``M (.) (CA (x) CB)^(x)`` mapped in by ``Id (.) j``;
    its shape is compared with ``(M_ee (x) CA (x) CB)^(x)``.
    """
    report = CheckReport(title=f"{m.label} (.) ({a.label} v {b.label})")
    cp = coproduct(a, b)
    prod, to_prod = cp.to_product()
    legs = [left_map(m, pr.compose(to_prod)) for pr in prod.projections]
    target = product(legs[0].target, legs[1].target)
    rho = target.induced(legs[0], legs[1])
    iota = left_map(m, cp.j())
    report.merge(check_short_exact(iota, rho), prefix="coproduct.")

    kernel_group = FgabTensor(m.ee, cp.z.group).group
    expected = a_tensor(kernel_group)
    left = iota.source
    report.add(
        "coproduct.kernel_shape",
        left.e.abelianization.group.isomorphic(expected.e.abelianization.group) and left.ee.isomorphic(expected.ee),
        None, f"{left.e.abelianization.group} / {left.ee} vs {kernel_group}",
    )
    report.summary["middle.ee"] = str(rho.source.ee)
    report.summary["kernel"] = str(kernel_group)
    return report


def cover_agreement_report(m: SquareGroup, n: SquareGroup) -> CheckReport:
    """Compute ``M (.) N`` as the cokernel of ``K (.) N -> F (.) N`` and compare.

    ``F -> M`` is the free cover and ``K`` its kernel; right exactness makes
    the induced map from the cokernel onto the presented product an
    isomorphism.
    """
    report = CheckReport(title=f"free-cover route for {m.label} (.) {n.label}")
    cover = free_cover(m)
    _, incl = kernel(cover)
    coker = cokernel(right_map(incl, n))
    induced = induced_from_quotient(right_map(cover, n), coker)
    report.add("cover.iso", induced.is_iso(), None if induced.is_iso() else coker.square.label)
    report.summary["cover.ee"] = str(coker.square.ee)
    report.summary["presented.ee"] = str(tensor(m, n).result.ee)
    logger.debug(f"free-cover route for {m.label} (.) {n.label}: {coker.square.ee}")
    return report


def exactness_checks(
    m: SquareGroup,
    b: SquareGroup,
    c: SquareGroup,
    ses: Optional[tuple] = None,
) -> CheckReport:
    """Product preservation on ``(b, c)``, the coproduct sequence on ``(b, c)``
    and, when ``ses = (i, p)`` is given, right exactness along it."""
    report = CheckReport(title=f"exactness of {m.label} (.) -")
    report.merge(product_preservation_report(m, b, c))
    report.merge(coproduct_sequence_report(m, b, c))
    if ses is not None:
        i, p = ses
        report.merge(right_exactness_report(m, i, p))
        if is_free_shape(m):
            report.merge(mono_report(m, i))
    return report
