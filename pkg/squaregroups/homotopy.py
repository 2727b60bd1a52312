"""Homotopy of the spectrum of ``(-) (.) M`` and computable ``Tor``.

The spectrum of ``G -> G (x) M`` has the homotopy groups of the complex::

    ... -> M_ee --(Id+T)--> M_ee --(Id-T)--> M_ee --P--> M_e

so ``pi_0 = Coker(P)``, ``pi_1 = Ker(P) / Im(Id - T)`` and the groups
repeat with period two from degree two on. The first k-invariant is
``x-bar -> (x|x)_H``.

``Tor`` of square groups is only computed where it has a closed form:
against ``A^(x)`` and against projective objects.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .checks import CheckReport
from .constructors import a_tensor, a_tensor_map
from .exactness import is_free_shape, left_map, right_exactness_report, right_map
from .limits import kernel
from .sqcore import SgMorphism, SquareGroup
from .tensor import t_hom
from .utils import setup_logger
from .zalgebra import (
    ChainComplexZ,
    FgAbelianGroup,
    FgabHom,
    FgabTensor,
    chain_homology,
    fgab_tor1,
    homology_with_projection,
)


logger = setup_logger(__name__)


# ---------------------------------------------------------------------------
# The two-periodic complex


def spectrum_complex(m: SquareGroup, top: int) -> ChainComplexZ:
    """The complex in degrees ``0..top``.

    Degree 0 holds ``Im(P)``, presented as ``M_ee / Ker(P)``, so the
    kernel of the first boundary is ``Ker(P)`` even when ``M_e`` is not
    abelian. Its ``H_0`` is therefore zero; ``pi_0`` is read off
    ``Coker(P)`` instead.

    Raises:
        ValueError: If ``top < 1``
    """
    if top < 1:
        raise ValueError(f"the spectrum complex needs at least degree 1, got {top}")
    ee = m.ee
    image, to_image = m.p.image_group()
    t = t_hom(m)
    ident = FgabHom.identity(ee)
    minus, plus = ident - t, ident + t
    groups: List[FgAbelianGroup] = [image] + [ee] * top
    boundaries = [to_image] + [minus if degree % 2 == 0 else plus for degree in range(2, top + 1)]
    return ChainComplexZ(groups, boundaries)


def spectrum_homotopy(m: SquareGroup, i: int) -> FgAbelianGroup:
    """``pi_i`` of the spectrum of ``(-) (.) M``."""
    if i < 0:
        raise ValueError(f"homotopy degree must be non-negative, got {i}")
    if i == 0:
        return m.coker.group
    return chain_homology(spectrum_complex(m, i + 1), i)


def homotopy_groups(m: SquareGroup, top: int = 4) -> List[FgAbelianGroup]:
    """``pi_0 .. pi_top`` from a single complex."""
    c = spectrum_complex(m, max(top + 1, 2))
    return [m.coker.group] + [chain_homology(c, i) for i in range(1, top + 1)]


# ---------------------------------------------------------------------------
# k-invariant


@dataclass
class PostnikovInvariant:
    """``k: pi_0 -> pi_1`` with the cycle data of ``pi_1``.

    Attributes:
        k: The invariant
        pi1: ``Ker(P) / Im(Id - T)``
        cycles_incl: ``Ker(P) -> M_ee``
        projection: ``Ker(P) -> pi1``
    """

    square: SquareGroup
    k: FgabHom
    pi1: FgAbelianGroup
    cycles_incl: FgabHom
    projection: FgabHom

    def class_of(self, a) -> List[int]:
        """Class in ``pi_1`` of a cycle given in ``M_ee`` coordinates."""
        z = self.cycles_incl.preimage(a)
        if z is None:
            raise ValueError(f"{list(a)} is not in Ker(P)")
        return list(self.projection(z))


def k_postnikov(m: SquareGroup) -> PostnikovInvariant:
    """The first Postnikov invariant ``x-bar -> (x|x)_H``."""
    c = spectrum_complex(m, 2)
    pi1, incl, proj = homology_with_projection(c, 1)
    partial = PostnikovInvariant(m, FgabHom.zero(m.coker.group, pi1), pi1, incl, proj)
    images = [partial.class_of(m.cross(x, x)) for x in m.word_gens()]
    partial.k = FgabHom.from_generator_images(m.coker.group, pi1, images)
    logger.debug(f"k-invariant of {m.label}: {m.coker.group} -> {pi1}")
    return partial


def k_postnikov_report(m: SquareGroup) -> CheckReport:
    """Compare the spectrum k-invariant with ``k: Coker(P) -> Ker(P-bar)``."""
    report = CheckReport(title=f"k-invariant of {m.label}")
    inv = k_postnikov(m)
    derived = m.derived
    report.add(
        "k.pi1_shape", inv.pi1.isomorphic(derived.ker_pbar),
        detail=f"pi_1 = {inv.pi1}, Ker(P-bar) = {derived.ker_pbar}",
    )
    to_q = FgabHom.from_function(
        inv.pi1, derived.q_group,
        lambda g: derived.q_proj(inv.cycles_incl(inv.projection.preimage(g))),
    )
    names = m.e.word_names()
    bad = None
    for g, x in enumerate(m.word_gens()):
        ours = to_q(inv.k(m.coker(x)))
        if list(ours) != list(derived.k_in_q(x)):
            bad = names[g]
            break
    report.add("k.agrees", bad is None, bad)
    report.summary["k.nonzero"] = str(not inv.k.is_zero())
    return report


def spectrum_report(m: SquareGroup, top: int = 5) -> CheckReport:
    """Homotopy groups, two-periodicity from degree two, and the k-invariant."""
    report = CheckReport(title=f"spectrum of (-) (.) {m.label}")
    pis = homotopy_groups(m, top)
    for i, g in enumerate(pis):
        report.summary[f"pi_{i}"] = str(g)
    report.add("spectrum.pi0", pis[0].isomorphic(m.coker.group))
    for i in range(2, top - 1):
        report.add(f"spectrum.periodic_{i}", pis[i].isomorphic(pis[i + 2]), detail=f"{pis[i]} vs {pis[i + 2]}")
    report.merge(k_postnikov_report(m))
    return report


# ---------------------------------------------------------------------------
# Tor


def tor_ee(i: int, m: SquareGroup, n: SquareGroup) -> FgAbelianGroup:
    """The ee-level of ``Tor_i(M, N)``, which is ``Tor^Z_i(M_ee, N_ee)``."""
    if i < 0:
        raise ValueError(f"Tor degree must be non-negative, got {i}")
    if i == 0:
        return FgabTensor(m.ee, n.ee).group
    if i == 1:
        return fgab_tor1(m.ee, n.ee)[0]
    return FgAbelianGroup.trivial()


def tor1_atensor(a: FgAbelianGroup, m: SquareGroup) -> SquareGroup:
    """``Tor_1(A^(x), M) = (Tor^Z_1(A, M_ee))^(x)``."""
    group, _ = fgab_tor1(a, m.ee)
    return a_tensor(group, label=f"Tor_1({a}^(x), {m.label})")


def free_resolution(a: FgAbelianGroup) -> Tuple[FgabHom, FgabHom]:
    """``0 -> F_1 -> F_0 -> A -> 0`` from the invariant factors of ``A``.

    Returns:
        ``(d: F_1 -> F_0, eps: F_0 -> A)``
    """
    n = a.rank
    torsion = [(i, d) for i, d in enumerate(a.invariants) if d]
    f0 = FgAbelianGroup.free(n)
    f1 = FgAbelianGroup.free(len(torsion))
    d = FgabHom.from_generator_images(f1, f0, [f0.scale(k, f0.gen(i)) for i, k in torsion])
    eps = FgabHom.from_generator_images(f0, a, a.gens())
    return d, eps


def tor1_resolution(a: FgAbelianGroup, m: SquareGroup) -> SquareGroup:
    """``Ker(F_1^(x) (.) M -> F_0^(x) (.) M)`` computed from presented tensors."""
    d, _ = free_resolution(a)
    f = right_map(a_tensor_map(d), m)
    square, _ = kernel(f)
    return square


def tor1_report(a: FgAbelianGroup, m: SquareGroup) -> CheckReport:
    """Cross-check the closed form of ``Tor_1(A^(x), M)`` against a resolution."""
    report = CheckReport(title=f"Tor_1({a}^(x), {m.label})")
    closed = tor1_atensor(a, m)
    resolved = tor1_resolution(a, m)
    report.add(
        "tor1.e", closed.e.abelianization.group.isomorphic(resolved.e.abelianization.group),
        detail=f"{closed.e.abelianization.group} vs {resolved.e.abelianization.group}",
    )
    report.add("tor1.ee", closed.ee.isomorphic(resolved.ee), detail=f"{closed.ee} vs {resolved.ee}")
    report.add("tor1.abelian", resolved.is_abelian())
    report.summary["tor1"] = str(closed.e.abelianization.group)
    return report


def tor1_closed(m: SquareGroup, n: SquareGroup) -> Optional[SquareGroup]:
    """``Tor_1(M, N)`` where a closed form applies, else ``None``."""
    if n.is_zero() or is_free_shape(n):
        return a_tensor(FgAbelianGroup.trivial(), label="0")
    if n.kind == "atensor":
        return tor1_atensor(n.params["group"], m)
    return None


def _same_shape(x: SquareGroup, y: SquareGroup) -> bool:
    return x.e.abelianization.group.isomorphic(y.e.abelianization.group) and x.ee.isomorphic(y.ee)


def _orders(x: SquareGroup) -> Tuple[Optional[int], Optional[int]]:
    return x.e.abelianization.group.order(), x.ee.order()


def les_check(i: SgMorphism, p: SgMorphism, m: SquareGroup) -> CheckReport:
    """Exactness of the ``Tor`` sequence of ``M (.) -`` on ``0 -> N1 -> N -> N2 -> 0``::

        Tor_1(M, N1) -> Tor_1(M, N) -> Tor_1(M, N2) -> M (.) N1 -> M (.) N -> M (.) N2 -> 0

    Nodes without a closed form are reported as skipped.
    """
    report = CheckReport(title=f"Tor sequence of {m.label} (.) -")
    report.merge(right_exactness_report(m, i, p), prefix="les.")
    if not report.ok:
        return report

    tors: Dict[str, Optional[SquareGroup]] = {}
    for name, node in (("n1", i.source), ("n", i.target), ("n2", p.target)):
        tors[name] = tor1_closed(m, node)
        if tors[name] is None:
            report.skip(f"les.tor1_{name}", f"no closed form for Tor_1({m.label}, {node.label})")
        else:
            report.summary[f"tor1.{name}.ee"] = str(tors[name].ee)
            report.add(f"les.tor1_{name}_abelian", tors[name].is_abelian())

    ker, _ = kernel(left_map(m, i))
    report.summary["ker.ee"] = str(ker.ee)
    t1, t, t2 = tors["n1"], tors["n"], tors["n2"]
    if t is not None and t2 is not None and t.is_zero():
        # Tor_1(M, N) = 0 makes the connecting map an isomorphism onto the kernel.
        report.add("les.connecting", _same_shape(t2, ker), detail=f"{t2.ee} vs {ker.ee}")
    elif t1 is not None and t1.is_zero() and t is not None and t2 is not None:
        # 0 -> Tor_1(M, N) -> Tor_1(M, N2) -> Ker -> 0
        orders = [_orders(x) for x in (t, t2, ker)]
        if any(v is None for pair in orders for v in pair):
            report.skip("les.connecting", "infinite terms around the connecting map")
        else:
            (te, tee), (t2e, t2ee), (ke, kee) = orders
            report.add("les.connecting", te * ke == t2e and tee * kee == t2ee, detail=str(orders))
    else:
        report.skip("les.connecting", "Tor_1 terms around the connecting map are not all known")

    if is_free_shape(i.target):
        report.add("les.projective_middle", t is not None and t.is_zero())
    return report
