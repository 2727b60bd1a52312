"""Kernels, quotients, cokernels, coproducts and Hom-sets of square groups."""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from .checks import CheckReport
from .config import VerificationConfig
from .constructors import a_tensor, zq, znil
from .nil2 import (
    CentralHom,
    Nil2Datum,
    Nil2Element,
    Nil2Hom,
    Nil2Presentation,
    Nil2Quotient,
    Nil2Subgroup,
    QuadraticMap,
    Syllables,
    relator_descent_report,
    subgroup_datum,
)
from .sqcore import SgMorphism, SquareGroup, SquareProduct, product
from .utils import UnsupportedInstanceError, ValidationError, setup_logger
from .zalgebra import (
    DirectSum,
    FgAbelianGroup,
    FgabHom,
    FgabTensor,
    Vector,
    direct_sum,
    subgroup,
    tensor_swap,
)


logger = setup_logger(__name__)


# ---------------------------------------------------------------------------
# Sub-square groups


class SubSquareGroup:
    """Sub-square group of ``parent`` generated levelwise by the given elements."""

    def __init__(self, parent: SquareGroup, e_gens: Sequence[Nil2Element], ee_gens: Sequence[Sequence[int]]):
        self.parent = parent
        self.e_gens = list(e_gens)
        self.ee_gens = [parent.ee.reduce(a) for a in ee_gens]
        self.e_sub: Nil2Subgroup = subgroup_datum(parent.e, self.e_gens)
        self.ee_group, self.ee_incl = subgroup(parent.ee, self.ee_gens)

    def contains_e(self, x: Nil2Element) -> bool:
        return self.e_sub.contains(x)

    def contains_ee(self, a: Sequence[int]) -> bool:
        return self.ee_incl.preimage(a) is not None

    def closure_report(self) -> CheckReport:
        """``P(K_ee) in K_e``, ``H(K_e) in K_ee`` and ``(K_e | K_e) in K_ee``."""
        m = self.parent
        report = CheckReport(title="sub-square group")
        bad = next((i for i, a in enumerate(self.ee_gens) if not self.contains_e(m.P(a))), None)
        report.add("sub.p", bad is None, None if bad is None else f"P(k_ee{bad})")
        bad = next((i for i, x in enumerate(self.e_gens) if not self.contains_ee(m.H(x))), None)
        report.add("sub.h", bad is None, None if bad is None else f"H(k{bad})")
        bad = None
        for i, x in enumerate(self.e_gens):
            for j, y in enumerate(self.e_gens):
                if not self.contains_ee(m.cross(x, y)):
                    bad = f"(k{i} | k{j})"
                    break
            if bad:
                break
        report.add("sub.cross", bad is None, bad)
        return report


def is_normal(sub: SubSquareGroup) -> CheckReport:
    """Normality: ``K_e`` normal in ``M_e`` and ``(M_e | K_e)``, ``(K_e | M_e)`` inside ``K_ee``.

    Returns:
        CheckReport whose failures name the violating pair
    """
    m = sub.parent
    report = CheckReport(title="normality")
    report.merge(sub.closure_report())
    names = m.e.word_names()
    bad = None
    for i, k in enumerate(sub.e_gens):
        for g, y in enumerate(m.word_gens()):
            if not sub.contains_e(m.e.commutator(k, y)):
                bad = f"[k{i}, {names[g]}]"
                break
        if bad:
            break
    report.add("normal.conjugation", bad is None, bad)
    bad = None
    for i, k in enumerate(sub.e_gens):
        for g, y in enumerate(m.word_gens()):
            if not sub.contains_ee(m.cross(y, k)):
                bad = f"({names[g]} | k{i})"
            elif not sub.contains_ee(m.cross(k, y)):
                bad = f"(k{i} | {names[g]})"
            if bad:
                break
        if bad:
            break
    report.add("normal.cross", bad is None, bad)
    return report


@dataclass
class QuotientResult:
    """``M / K`` with the projection and sections on both levels."""

    square: SquareGroup
    projection: SgMorphism
    e_quotient: Nil2Quotient
    ee_projection: FgabHom

    def lift_e(self, y: Nil2Element) -> Nil2Element:
        return self.e_quotient.lift(y)

    def lift_ee(self, b: Sequence[int]) -> Vector:
        source = self.ee_projection.source
        return source.reduce(self.ee_projection.target.to_gens(b))


def quotient_square_group(
    m: SquareGroup,
    e_relators: Sequence[Nil2Element],
    ee_relators: Sequence[Sequence[int]],
    kind: str = "quotient",
    label: Optional[str] = None,
) -> QuotientResult:
    """Quotient by the normal closure of ``e_relators`` and the span of ``ee_relators``.

    The caller guarantees that the pair forms a normal sub-square group.

    Raises:
        NonRepresentableQuotientError: If the e-level quotient fails re-validation
        ValidationError: If H does not descend
    """
    e_quot = m.e.quotient_by(list(e_relators))
    ee_q, ee_proj = m.ee.quotient([list(a) for a in ee_relators])
    h_to_q = m.h.then(ee_proj)
    relator_descent_report(h_to_q, list(e_relators)).raise_for_failure()
    h = h_to_q.pushforward(e_quot)

    p_images = []
    for b in ee_q.gens():
        a = m.ee.reduce(ee_q.to_gens(b))
        p_images.append(e_quot.projection(m.P(a)))
    p = CentralHom(ee_q, e_quot.datum, p_images, check=False)
    square = SquareGroup(e_quot.datum, ee_q, p, h, kind=kind, label=label or f"{m.label}/K")
    projection = SgMorphism(m, square, e_quot.projection, ee_proj)
    logger.debug(f"quotient of {m.label}: e {m.e.n} -> {e_quot.datum.n} lattice generators, ee {m.ee} -> {ee_q}")
    return QuotientResult(square, projection, e_quot, ee_proj)


def quotient(sub: SubSquareGroup, label: Optional[str] = None) -> QuotientResult:
    """``M / K`` for a normal sub-square group.

    Raises:
        ValidationError: If ``sub`` is not normal; the witness names the pair
    """
    is_normal(sub).raise_for_failure()
    return quotient_square_group(sub.parent, sub.e_gens, sub.ee_gens, label=label)


def restrict(
    m: SquareGroup,
    e_sub: Nil2Subgroup,
    ee_group: FgAbelianGroup,
    ee_incl: FgabHom,
    kind: str = "sub",
    label: Optional[str] = None,
) -> Tuple[SquareGroup, SgMorphism]:
    """Square group structure on levelwise subgroups closed under ``P``, ``H`` and cross-effects.

    Raises:
        ValidationError: If the subgroups are not closed
    """
    incl = e_sub.inclusion

    def back_ee(a: Sequence[int], what: str) -> Vector:
        y = ee_incl.preimage(a)
        if y is None:
            raise ValidationError(f"{what} leaves the ee-level subgroup", check="sub.closure", witness=what)
        return y

    p_images = []
    for i, b in enumerate(ee_group.gens()):
        x = incl.preimage(m.P(ee_incl(b)))
        if x is None:
            raise ValidationError("P leaves the e-level subgroup", check="sub.closure", witness=f"ee{i}")
        p_images.append(x)
    p = CentralHom(ee_group, e_sub.datum, p_images, check=False)
    h = QuadraticMap.from_function(
        e_sub.datum, ee_group,
        lambda w: back_ee(m.H(incl(w)), f"H({w})"),
        lambda w, z: back_ee(m.cross(incl(w), incl(z)), f"({w} | {z})"),
    )
    square = SquareGroup(e_sub.datum, ee_group, p, h, kind=kind, label=label or f"K({m.label})")
    return square, SgMorphism(square, m, incl, ee_incl)


# ---------------------------------------------------------------------------
# Kernels and cokernels


def kernel(f: SgMorphism) -> Tuple[SquareGroup, SgMorphism]:
    """Levelwise kernel of ``f`` with its inclusion."""
    e_sub = f.fe.kernel()
    ee_group, ee_incl = f.fee.kernel()
    return restrict(f.source, e_sub, ee_group, ee_incl, kind="kernel", label=f"Ker({f.source.label}->{f.target.label})")


def cokernel(f: SgMorphism) -> QuotientResult:
    """``N`` modulo the smallest normal sub-square group containing ``Im(f)``.

    At the ee-level this kills ``f_ee(M_ee)`` and ``(f_e x | y)_H``, ``(y | f_e x)_H``.

    Raises:
        NonRepresentableQuotientError: If the e-level quotient fails re-validation
    """
    n = f.target
    images = [f.fe(x) for x in f.source.word_gens()]
    ee_rel = [f.fee(a) for a in f.source.ee.gens()]
    for x in images:
        for y in n.word_gens():
            ee_rel.append(n.cross(x, y))
            ee_rel.append(n.cross(y, x))
    return quotient_square_group(n, images, ee_rel, kind="cokernel", label=f"Coker({f.source.label}->{n.label})")


def is_epi(f: SgMorphism) -> bool:
    """Both levels surjective (equivalently, the cokernel vanishes)."""
    return f.fe.is_surjective() and f.fee.is_surjective()


def epi_report(f: SgMorphism) -> CheckReport:
    """Compare levelwise surjectivity with vanishing of the cokernel."""
    report = CheckReport(title="epimorphism")
    levelwise = is_epi(f)
    coker = cokernel(f).square
    report.add("epi.cokernel", levelwise == coker.is_zero(), f"surjective={levelwise}, cokernel={coker.summary()}")
    report.summary["epi"] = str(levelwise)
    return report


# ---------------------------------------------------------------------------
# Exactness and central extensions


def check_short_exact(i: SgMorphism, p: SgMorphism) -> CheckReport:
    """Exactness of ``0 -> A -> B -> C -> 0`` on both levels."""
    report = CheckReport(title="short exact sequence")
    report.add("ses.composable", i.target is p.source)
    if not report.ok:
        return report
    report.add("ses.injective_e", i.fe.is_injective())
    report.add("ses.injective_ee", i.fee.is_injective())
    report.add("ses.surjective_e", p.fe.is_surjective())
    report.add("ses.surjective_ee", p.fee.is_surjective())
    report.add("ses.composite", p.compose(i).is_zero())
    bad = next((k for k in p.fe.kernel_generators() if i.fe.preimage(k) is None), None)
    report.add("ses.exact_e", bad is None, bad)
    bad = next((k for k in p.fee.kernel_generators() if i.fee.preimage(k) is None), None)
    report.add("ses.exact_ee", bad is None, bad)
    return report


def central_extension_report(i: SgMorphism) -> CheckReport:
    """``i(A_e)`` central in ``B_e`` with vanishing cross-effects against ``B_e``."""
    b = i.target
    report = CheckReport(title="central extension")
    names = i.source.e.word_names()
    bnames = b.e.word_names()
    images = [i.fe(x) for x in i.source.word_gens()]
    bad = None
    for g, x in enumerate(images):
        for h, y in enumerate(b.word_gens()):
            if not b.e.commutator(x, y).is_zero():
                bad = f"[{names[g]}, {bnames[h]}]"
                break
        if bad:
            break
    report.add("central.commute", bad is None, bad)
    bad = None
    for g, x in enumerate(images):
        for h, y in enumerate(b.word_gens()):
            if any(b.cross(x, y)) or any(b.cross(y, x)):
                bad = f"({names[g]} | {bnames[h]})"
                break
        if bad:
            break
    report.add("central.cross", bad is None, bad)
    return report


def induced_on_quotients(
    f: SgMorphism, source: QuotientResult, target: QuotientResult
) -> SgMorphism:
    """The morphism ``M/K -> N/L`` induced by ``f`` (``f(K)`` must lie in ``L``)."""
    src = source.square
    e_images = [target.projection.fe(f.fe(source.lift_e(y))) for y in src.word_gens()]
    ee_rows = [target.projection.fee(f.fee(source.lift_ee(b))) for b in src.ee.gens()]
    return SgMorphism.from_images(src, target.square, e_images, ee_rows)


def induced_from_quotient(f: SgMorphism, source: QuotientResult) -> SgMorphism:
    """The morphism ``M/K -> N`` induced by ``f`` vanishing on ``K``."""
    src = source.square
    e_images = [f.fe(source.lift_e(y)) for y in src.word_gens()]
    ee_rows = [f.fee(source.lift_ee(b)) for b in src.ee.gens()]
    return SgMorphism.from_images(src, f.target, e_images, ee_rows)


@dataclass
class Refinement:
    """Output of the centralizer refinement of a short exact sequence."""

    refined: SquareGroup
    into_a: SgMorphism
    a_quotient: QuotientResult
    b_quotient: QuotientResult
    bottom_inclusion: SgMorphism
    bottom_projection: SgMorphism
    report: CheckReport


def centralizer_refinement(i: SgMorphism, p: SgMorphism) -> Refinement:
    """The sub-square group ``A'`` of ``A`` central in ``B`` and the diagram around it.

    ``A'_e`` consists of the ``x`` commuting with ``B_e`` with
    ``(x|y)_H = 0 = (y|x)_H``; ``A'_ee = {a : P(a) in A'_e}``.

    Raises:
        ValidationError: If ``A -> B -> C`` is not short exact
    """
    check_short_exact(i, p).raise_for_failure()
    a, b = i.source, i.target
    ys = b.word_gens()
    parts = [b.e.central] * len(ys) + [b.ee] * (2 * len(ys))
    target_sum = direct_sum(parts)
    obstruction = Nil2Datum.abelian(target_sum.group)

    def defect(x: Nil2Element) -> Nil2Element:
        ix = i.fe(x)
        comps = [b.e.commutator(ix, y).c for y in ys]
        comps += [b.cross(ix, y) for y in ys]
        comps += [b.cross(y, ix) for y in ys]
        return obstruction.element(list(target_sum.pack(comps)))

    phi = Nil2Hom(a.e, obstruction, [defect(x) for x in a.word_gens()])
    e_sub = phi.kernel()
    phi_ee = FgabHom(a.ee, target_sum.group, [phi(a.P(v)).v for v in a.ee.gens()])
    ee_group, ee_incl = phi_ee.kernel()
    refined, into_a = restrict(a, e_sub, ee_group, ee_incl, kind="refined", label=f"{a.label}'")

    into_b = i.compose(into_a)
    a_quot = quotient_square_group(
        a, [into_a.fe(x) for x in refined.word_gens()], [into_a.fee(v) for v in refined.ee.gens()],
        label=f"{a.label}/{refined.label}",
    )
    b_quot = quotient_square_group(
        b, [into_b.fe(x) for x in refined.word_gens()], [into_b.fee(v) for v in refined.ee.gens()],
        label=f"{b.label}/{refined.label}",
    )
    bottom_i = induced_on_quotients(i, a_quot, b_quot)
    bottom_p = induced_from_quotient(p, b_quot)

    report = CheckReport(title="centralizer refinement")
    report.merge(central_extension_report(into_b), prefix="column.")
    report.merge(central_extension_report(into_a), prefix="column_a.")
    report.merge(check_short_exact(bottom_i, bottom_p), prefix="bottom.")
    report.merge(central_extension_report(bottom_i), prefix="bottom.")
    report.summary["refined.e"] = str(refined.e.abelianization.group)
    report.summary["refined.ee"] = str(refined.ee)
    return Refinement(refined, into_a, a_quot, b_quot, bottom_i, bottom_p, report)


# ---------------------------------------------------------------------------
# Coproducts


def _distinct(left: Sequence[str], right: Sequence[str]) -> List[str]:
    names = list(left) + list(right)
    if len(set(names)) == len(names):
        return names
    return [f"{x}.1" for x in left] + [f"{x}.2" for x in right]


def _eval(d: Nil2Datum, offset: int, word: Syllables) -> Nil2Element:
    acc = d.zero()
    for g, k in word:
        if k:
            acc = acc + k * d.gen(offset + g)
    return acc


def _ordered(d: Nil2Datum, offset: int, owner: Nil2Datum, x: Nil2Element) -> Nil2Element:
    acc = d.zero()
    for g, k in enumerate(owner.word_coords(x)):
        if k:
            acc = acc + k * d.gen(offset + g)
    return acc


class Coproduct:
    """``M v N`` with injections, the comparison map to ``M x N`` and the map ``j``.

    The e-level is presented on the word generators of both factors with
    ``[x, y] = x-bar (x) y-bar`` in ``Coker(P^M) (x) Coker(P^N)`` and the
    relators of both factors.
    """

    def __init__(self, m: SquareGroup, n: SquareGroup, label: Optional[str] = None):
        self.left, self.right = m, n
        cm, cn = m.coker, n.coker
        self.z = FgabTensor(cm.group, cn.group)
        self.z_rev = FgabTensor(cn.group, cm.group)
        self.swap = tensor_swap(self.z, self.z_rev)
        self.swap_back = tensor_swap(self.z_rev, self.z)
        pm, pn = m.e.nwords, n.e.nwords
        self.offsets = (0, pm)
        xs, ys = m.word_gens(), n.word_gens()

        commutators = {
            (g, pm + h): self.z.pair(cm(x), cn(y))
            for g, x in enumerate(xs) for h, y in enumerate(ys)
        }
        self.presentation = pres = Nil2Presentation(_distinct(m.e.word_names(), n.e.word_names()), self.z.group, commutators)
        d = pres.datum
        relators = [_eval(d, 0, word) for _, word in m.e.relators]
        relators += [_eval(d, pm, word) for _, word in n.e.relators]

        self.sum: DirectSum = direct_sum([m.ee, n.ee, self.z.group, self.z_rev.group])
        ee = self.sum.group
        zero_m, zero_n = m.ee.zero(), n.ee.zero()
        zero_z, zero_r = self.z.group.zero(), self.z_rev.group.zero()

        def pack(a=None, b=None, u=None, w=None) -> Vector:
            return self.sum.pack([a or zero_m, b or zero_n, u or zero_z, w or zero_r])

        free_values = {}
        for (s, t), idx in pres.free_pairs.items():
            if t < pm:
                free_values[idx] = pack(a=m.ee.sub(m.cross(xs[s], xs[t]), m.cross(xs[t], xs[s])))
            else:
                y1, y2 = ys[s - pm], ys[t - pm]
                free_values[idx] = pack(b=n.ee.sub(n.cross(y1, y2), n.cross(y2, y1)))

        values = [pack(a=m.H(x)) for x in xs] + [pack(b=n.H(y)) for y in ys]
        for c in d.central.gens():
            u, f = pres.summed.unpack(c)
            terms = [(1, pack(u=u, w=self.z_rev.group.neg(self.swap(u))))]
            terms += [(k, free_values[idx]) for idx, k in enumerate(f) if k]
            values.append(ee.combine(terms))

        p_words = d.nwords
        cross = [[ee.zero()] * p_words for _ in range(p_words)]
        for g, x in enumerate(xs):
            for g2, x2 in enumerate(xs):
                cross[g][g2] = pack(a=m.cross(x, x2))
            for h, y in enumerate(ys):
                cross[g][pm + h] = pack(u=self.z.pair(cm(x), cn(y)))
                cross[pm + h][g] = pack(w=self.z_rev.pair(cn(y), cm(x)))
        for h, y in enumerate(ys):
            for h2, y2 in enumerate(ys):
                cross[pm + h][pm + h2] = pack(b=n.cross(y, y2))
        h_pres = QuadraticMap(d, ee, values, cross)
        relator_descent_report(h_pres, relators).raise_for_failure()

        self.quotient = quot = pres.finish(relators)
        h = h_pres.pushforward(quot)
        p_images = []
        for v in ee.gens():
            a, b, u, w = self.sum.unpack(v)
            x = _ordered(d, 0, m.e, m.P(a)) + _ordered(d, pm, n.e, n.P(b))
            x = x + pres.central_element(u) - pres.central_element(self.swap_back(w))
            p_images.append(quot.projection(x))
        p = CentralHom(ee, quot.datum, p_images, check=False)
        self.square = SquareGroup(
            quot.datum, ee, p, h,
            kind="coproduct", label=label or f"({m.label} v {n.label})", params={"factors": (m, n)},
        )

        self.injections = [
            SgMorphism(m, self.square, Nil2Hom(m.e, quot.datum, [quot.projection(d.gen(g)) for g in range(pm)]),
                       self.sum.injections[0]),
            SgMorphism(n, self.square, Nil2Hom(n.e, quot.datum, [quot.projection(d.gen(pm + h)) for h in range(pn)]),
                       self.sum.injections[1]),
        ]
        logger.debug(f"coproduct {self.square.label}: ee = {ee}, e has {quot.datum.n} lattice generators")

    def embed_e(self, side: int, x: Nil2Element) -> Nil2Element:
        owner = (self.left, self.right)[side].e
        return self.quotient.projection(_ordered(self.presentation.datum, self.offsets[side], owner, x))

    def j_e(self, u: Sequence[int]) -> Nil2Element:
        """``x (x) y -> [x, y]``."""
        return self.quotient.projection(self.presentation.central_element(u))

    def induced(self, f: SgMorphism, g: SgMorphism) -> SgMorphism:
        """The morphism ``M v N -> X`` restricting to ``f`` and ``g``.

        Raises:
            ValidationError: If ``f`` and ``g`` have different targets
        """
        x_sq = f.target
        if g.target is not x_sq:
            raise ValidationError("coproduct legs must share their target", check="coproduct.induced")
        m, n = self.left, self.right
        cm, cn = m.coker, n.coker
        lifts_m = [cm.lift(c) for c in cm.group.gens()]
        lifts_n = [cn.lift(c) for c in cn.group.gens()]
        comm = self.z.lift(
            x_sq.e.central,
            lambda i, j: x_sq.e.commutator(f(lifts_m[i]), g(lifts_n[j])).c,
        )
        cross_lr = self.z.lift(x_sq.ee, lambda i, j: x_sq.cross(f(lifts_m[i]), g(lifts_n[j])))
        cross_rl = self.z_rev.lift(x_sq.ee, lambda i, j: x_sq.cross(g(lifts_n[i]), f(lifts_m[j])))

        pres = self.presentation
        d = pres.datum
        pm = self.offsets[1]
        gens = [f(x) for x in m.word_gens()] + [g(y) for y in n.word_gens()]
        pairs = {idx: pair for pair, idx in pres.free_pairs.items()}
        images = list(gens)
        for c in d.central.gens():
            u, fr = pres.summed.unpack(c)
            acc = x_sq.e.central_element(comm(u))
            for idx, k in enumerate(fr):
                if k:
                    s, t = pairs[idx]
                    acc = acc + k * x_sq.e.commutator(gens[s], gens[t])
            images.append(acc)
        on_presentation = Nil2Hom(d, x_sq.e, images, check=False)
        e_images = [on_presentation(s) for s in self.quotient.section]

        ee_rows = []
        for v in self.square.ee.gens():
            a, b, u, w = self.sum.unpack(v)
            ee_rows.append(x_sq.ee.add(f.fee(a), g.fee(b), cross_lr(u), cross_rl(w)))
        return SgMorphism.from_images(self.square, x_sq, e_images, ee_rows)

    def to_product(self) -> Tuple[SquareProduct, SgMorphism]:
        prod = product(self.left, self.right)
        return prod, self.induced(prod.injections[0], prod.injections[1])

    def j(self) -> SgMorphism:
        """``j: (Coker P^M (x) Coker P^N)^(x) -> M v N``.

        ``j_e(u) = [x, y]`` and ``j_ee(u1, u2) = u1 - swap(u2)``; the sign
        on the second summand is what makes ``j`` commute with ``P`` and ``H``.
        """
        source = a_tensor(self.z.group, label="(CM(x)CN)^(x)")
        summed = source.params["sum"]
        e_images = [self.j_e(source.e.word_gen(g).v) for g in range(source.e.nwords)]
        ee_rows = []
        for v in source.ee.gens():
            u1, u2 = summed.unpack(v)
            ee_rows.append(self.sum.pack([
                self.left.ee.zero(), self.right.ee.zero(), u1, self.z_rev.group.neg(self.swap(u2)),
            ]))
        return SgMorphism.from_images(source, self.square, e_images, ee_rows)

    def sequence_report(self) -> CheckReport:
        """Exactness of ``0 -> (CM (x) CN)^(x) -> M v N -> M x N -> 0`` with ``j`` central."""
        j = self.j()
        _, to_prod = self.to_product()
        report = CheckReport(title=f"coproduct sequence of {self.square.label}")
        report.merge(check_short_exact(j, to_prod))
        bad = None
        for i, u in enumerate(self.z.group.gens()):
            x = self.j_e(u)
            if not all(self.square.e.commutator(x, y).is_zero() for y in self.square.word_gens()):
                bad = f"j(u{i})"
                break
        report.add("coproduct.j_central", bad is None, bad)
        report.summary["ee"] = str(self.square.ee)
        report.summary["kernel"] = str(self.z.group)
        return report


def coproduct(m: SquareGroup, n: SquareGroup, label: Optional[str] = None) -> Coproduct:
    return Coproduct(m, n, label)


# ---------------------------------------------------------------------------
# Hom-sets


def _require_finite(m: SquareGroup, what: str) -> None:
    if not m.is_finite():
        raise UnsupportedInstanceError(f"{what} needs a finite square group, {m.label} is infinite")


def enumerate_homs(source: SquareGroup, target: SquareGroup, limit: int = 4096) -> Iterator[SgMorphism]:
    """All square-group morphisms ``source -> target`` for a finite target.

    Raises:
        UnsupportedInstanceError: If the target is infinite or the search
            space exceeds ``limit`` candidate assignments
    """
    _require_finite(target, "Hom enumeration")
    e_elements = list(target.e.elements())
    ee_elements = list(target.ee.elements())
    size = len(e_elements) ** source.e.nwords * len(ee_elements) ** source.ee.rank
    if size > limit:
        raise UnsupportedInstanceError(
            f"Hom({source.label}, {target.label}) has {size} candidates, above the limit {limit}"
        )
    for e_images in cartesian(e_elements, repeat=source.e.nwords):
        fe = Nil2Hom(source.e, target.e, list(e_images), check=False)
        if not fe.check_report().ok:
            continue
        for ee_rows in cartesian(ee_elements, repeat=source.ee.rank):
            try:
                fee = FgabHom(source.ee, target.ee, list(ee_rows))
            except ValidationError:
                continue
            f = SgMorphism(source, target, fe, fee, check=False)
            if f.check_report().ok:
                yield f


def hom_from_atensor(a_sq: SquareGroup, m: SquareGroup, g: FgabHom) -> SgMorphism:
    """``f_e(a) = P g(a)``, ``f_ee(a, b) = g(a) + T g(b)`` for ``g: A -> M_ee``."""
    summed = a_sq.params["sum"]
    e_images = [m.P(g(x.v)) for x in a_sq.word_gens()]
    ee_rows = []
    for v in a_sq.ee.gens():
        left, right = summed.unpack(v)
        ee_rows.append(m.ee.add(g(left), m.T(g(right))))
    return SgMorphism.from_images(a_sq, m, e_images, ee_rows)


def hom_from_zq(q: SquareGroup, m: SquareGroup, x: Nil2Element) -> SgMorphism:
    """The morphism ``Z^Q -> M`` with ``s -> x``."""
    phx = m.P(m.H(x))
    return SgMorphism.from_images(q, m, [x, phx], [m.H(x), m.H(phx), m.cross(x, x)])


def hom_from_znil(z: SquareGroup, m: SquareGroup, x: Nil2Element) -> SgMorphism:
    """The morphism ``Z_nil -> M`` with ``1 -> x`` for a linear element ``x``."""
    return SgMorphism.from_images(z, m, [x], [m.cross(x, x)])


def _signature(f: SgMorphism) -> Tuple:
    return tuple((x.v, x.c) for x in f.fe.images), f.fee.rows


def hom_count_checks(m: SquareGroup, config: Optional[VerificationConfig] = None) -> CheckReport:
    """Verify the three Hom bijections on a finite square group.

    ``Hom(A^(x), M) = Hom(A, M_ee)`` for ``A = Z/2`` and ``Z``,
    ``Hom(Z^Q, M) = M_e`` and ``Hom(Z_nil, M) = L(M)``, the elements with
    ``H(x) = 0``. Each enumerated Hom-set is compared with the morphisms
    built from the explicit formulas.

    Raises:
        UnsupportedInstanceError: If ``m`` is infinite
    """
    config = config or VerificationConfig()
    _require_finite(m, "Hom counting")
    limit = config.enumeration_limit
    report = CheckReport(title=f"Hom bijections for {m.label}")

    for a in (FgAbelianGroup.cyclic(2), FgAbelianGroup.free(1)):
        a_sq = a_tensor(a)
        enumerated = {_signature(f) for f in enumerate_homs(a_sq, m, limit)}
        built = set()
        for g_rows in cartesian(list(m.ee.elements()), repeat=a.rank):
            try:
                g = FgabHom(a, m.ee, list(g_rows))
            except ValidationError:
                continue
            built.add(_signature(hom_from_atensor(a_sq, m, g)))
        report.add(f"hom.atensor[{a}]", enumerated == built, f"{len(enumerated)} enumerated, {len(built)} from Hom(A, M_ee)")
        report.summary[f"hom.atensor[{a}]"] = str(len(enumerated))

    q = zq()
    enumerated = {_signature(f) for f in enumerate_homs(q, m, limit)}
    built = {_signature(hom_from_zq(q, m, x)) for x in m.e.elements()}
    report.add("hom.zq", enumerated == built and len(built) == m.e.order(), f"{len(enumerated)} enumerated, |M_e| = {m.e.order()}")
    report.summary["hom.zq"] = str(len(enumerated))

    z = znil()
    linear = m.linear_elements()
    enumerated = {_signature(f) for f in enumerate_homs(z, m, limit)}
    built = {_signature(hom_from_znil(z, m, x)) for x in linear}
    report.add("hom.linear", enumerated == built and len(built) == len(linear), f"{len(enumerated)} enumerated, |L(M)| = {len(linear)}")
    report.summary["hom.linear"] = str(len(linear))
    return report


def cancellation_report(f: SgMorphism, test_targets: Sequence[SquareGroup], limit: int = 4096) -> CheckReport:
    """Whether ``h o f = 0`` forces ``h = 0`` for every ``h`` into the test targets.

    The cokernel of ``f`` is always added to the targets when it is finite,
    so a non-epimorphism is detected by its cokernel projection.
    """
    report = CheckReport(title="epimorphism by cancellation")
    targets = list(test_targets)
    coker = cokernel(f)
    if coker.square.is_finite():
        targets.append(coker.square)
    cancels = True
    witness = None
    for x in targets:
        for h in enumerate_homs(f.target, x, limit):
            if h.compose(f).is_zero() and not h.is_zero():
                cancels = False
                witness = f"nonzero h: {f.target.label} -> {x.label} with h o f = 0"
                break
        if not cancels:
            break
    report.add("epi.cancellation", cancels == is_epi(f), witness or f"cancels={cancels}")
    report.summary["cancels"] = str(cancels)
    return report
