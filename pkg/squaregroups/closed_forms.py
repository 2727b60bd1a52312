"""Closed forms of tensor products.

Each builder returns the closed-form square group together with an
isomorphism onto the presented product, verified on generators.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .checks import CheckReport
from .constructors import a_tensor, e_involution, from_abelian, v_free, znil_set, zq
from .nil2 import CentralHom, Nil2Datum, Nil2Element, Nil2Hom, QuadraticMap, nil2_product
from .sqcore import SgMorphism, SquareGroup, check_inverse_pair, product
from .tensor import TensorProduct, tensor
from .utils import ShapeMismatchError, UnsupportedInstanceError, setup_logger
from .zalgebra import DirectSum, FgAbelianGroup, FgabHom, FgabTensor, direct_sum


logger = setup_logger(__name__)


@dataclass
class ClosedForm:
    """A closed-form product with its comparison isomorphism.

    Attributes:
        name: Which closed form
        square: The closed-form square group
        product: The presented tensor product
        iso: ``square -> product.result``
    """

    name: str
    square: SquareGroup
    product: TensorProduct
    iso: SgMorphism
    summary: Dict[str, str] = field(default_factory=dict)

    def report(self) -> CheckReport:
        report = CheckReport(title=f"closed form {self.name}")
        report.merge(check_inverse_pair(self.iso, self.iso.inverse()), prefix=f"{self.name}.")
        report.summary.update(self.summary)
        return report


def _finish(name: str, square: SquareGroup, tp: TensorProduct, iso: SgMorphism) -> ClosedForm:
    if not iso.is_iso():
        raise ShapeMismatchError(f"{name}: comparison map onto {tp.label} is not an isomorphism")
    logger.debug(f"closed form {name}: e = {square.e.abelianization.group}, ee = {square.ee}")
    return ClosedForm(name, square, tp, iso, {"e.abelianization": str(square.e.abelianization.group), "ee": str(square.ee)})


def tensor_atensor(a: FgAbelianGroup, m: SquareGroup) -> ClosedForm:
    """``(A (x) M_ee)^(x) ~= A^(x) (.) M``.

    ``f_e(a (x) c) = (a, 0) # c`` and ``f_ee(a (x) c, b (x) d) = (a, 0) (x) c - (0, b) (x) T(d)``.
    """
    left = a_tensor(a)
    tp = tensor(left, m)
    sa = left.params["sum"]
    t = FgabTensor(a, m.ee)
    square = a_tensor(t.group, label=f"({a} (x) {m.label}_ee)^(x)")
    sg = square.params["sum"]
    res = tp.result
    ee = res.ee

    def first(i: int) -> List[int]:
        return sa.pack([a.gen(i), a.zero()])

    def second(i: int) -> List[int]:
        return sa.pack([a.zero(), a.gen(i)])

    e_images = []
    for g in square.word_gens():
        acc = res.e.zero()
        for (i, j), k in t.decompose(g.v).items():
            acc = acc + k * tp.bar(first(i), m.ee.gen(j))
        e_images.append(acc)
    ee_rows = []
    for x in square.ee.gens():
        u, v = sg.unpack(x)
        terms = [(k, tp.pair(first(i), m.ee.gen(j))) for (i, j), k in t.decompose(u).items()]
        terms += [(-k, tp.pair(second(i), m.T(m.ee.gen(j)))) for (i, j), k in t.decompose(v).items()]
        ee_rows.append(ee.combine(terms))
    iso = SgMorphism.from_images(square, res, e_images, ee_rows)
    return _finish("atensor", square, tp, iso)


def tensor_zq(m: SquareGroup) -> ClosedForm:
    """``Z^Q (.) M`` on ``M_ee x M_e``.

    ``P(a, b, c) = (a + b - Tb, Pc)``, ``H(a, x) = (a + Ta + Delta(x), -Ta, H(x))``;
    the comparison is ``(a, x) -> s (.) x + H(s) # a``.
    """
    z = zq()
    tp = tensor(z, m)
    prod = nil2_product(Nil2Datum.abelian(m.ee), m.e)
    e = prod.datum
    pa, px = prod.projections
    sums = direct_sum([m.ee, m.ee, m.ee])
    ee = sums.group
    zero = m.ee.zero()

    p_images = []
    for w in ee.gens():
        a, b, c = sums.unpack(w)
        first = m.ee.add(a, b, m.ee.neg(m.T(b)))
        p_images.append(prod.pair(prod.factors[0].element(list(first)), m.P(c)))
    p = CentralHom(ee, e, p_images, check=False)

    def h_value(w: Nil2Element) -> List[int]:
        a, x = pa(w).v, px(w)
        return sums.pack([m.ee.add(a, m.T(a), m.delta(x)), m.ee.neg(m.T(a)), m.H(x)])

    h = QuadraticMap.from_function(
        e, ee, h_value, lambda w, y: sums.pack([zero, zero, m.cross(px(w), px(y))]),
    )
    square = SquareGroup(e, ee, p, h, kind="closed", label=f"Z^Q (.) {m.label}")

    s = z.e.gen(0)
    hs, hphs, ss = z.ee.gens()
    res = tp.result
    e_images = [tp.odot(s, px(w)) + tp.bar(hs, pa(w).v) for w in e.word_gens()]
    ee_rows = []
    for w in ee.gens():
        a, b, c = sums.unpack(w)
        ee_rows.append(res.ee.add(tp.pair(hs, a), tp.pair(hphs, b), tp.pair(ss, c)))
    iso = SgMorphism.from_images(square, res, e_images, ee_rows)
    return _finish("zq", square, tp, iso)


@dataclass
class GnDatum:
    """``G_n(M) x M_ee^n`` with the layout of its central group."""

    datum: Nil2Datum
    sums: DirectSum
    pairs: List[Tuple[int, int]]


def g_n_datum(n: int, m: SquareGroup) -> GnDatum:
    """``G_n(M) x M_ee^n``.

    ``G_n(M)`` is ``M_e^n x M_ee^C(n,2)`` with
    ``(x_k, a_ij) + (y_k, b_ij) = (x_k + y_k, a_ij + b_ij + (x_j|y_i)_H)``.
    Central parts are laid out as ``n`` copies of the centre of ``M_e``,
    then ``a_ij`` for ``i < j``, then ``b_l``.

    Raises:
        UnsupportedInstanceError: If ``H`` has a cross-effect on a central generator of ``M_e``
    """
    d = m.e
    gens = m.word_gens()
    for g in range(d.n, d.nwords):
        if any(any(m.cross(gens[g], y)) or any(m.cross(y, gens[g])) for y in gens):
            raise UnsupportedInstanceError(f"{m.label}: H has a cross-effect on central generator {d.word_names()[g]}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    parts = [d.central] * n + [m.ee] * (len(pairs) + n)
    sums = direct_sum(parts)
    width = d.n
    total = n * width
    zero = sums.group.zero()
    beta = [[zero] * total for _ in range(total)]
    inj = sums.injections
    for k in range(n):
        for p in range(width):
            for q in range(width):
                beta[k * width + p][k * width + q] = inj[k](d.beta[p][q])
    for t, (i, j) in enumerate(pairs):
        for p in range(width):
            for q in range(width):
                beta[j * width + p][i * width + q] = inj[n + t](m.cross(d.gen(p), d.gen(q)))
    relations = []
    for k in range(n):
        for h, c in d.relation_basis:
            v = [0] * total
            v[k * width:(k + 1) * width] = h
            relations.append((v, inj[k](c)))
    names = [f"{x}_{k + 1}" for k in range(n) for x in d.names]
    return GnDatum(Nil2Datum(names, sums.group, beta, relations), sums, pairs)


def tensor_vn(n: int, m: SquareGroup) -> ClosedForm:
    """``V(n) (.) M`` with ``ee ~= M_ee^(n^2 + 2n)`` and ``e ~= G_n(M) x M_ee^n``.

    The comparison is
    ``(x_k, a_ij, b_l) -> sum_k k (.) x_k + sum_{i<j} (j|i) # a_ij + sum_l H(l) # b_l``;
    its inverse is computed and checked by composition.
    """
    if n < 1:
        raise ShapeMismatchError(f"V(n) needs n >= 1, got {n}")
    v = v_free(tuple(f"s{k + 1}" for k in range(n)))
    tp = tensor(v, m)
    res = tp.result
    layout = g_n_datum(n, m)
    e, sums, pairs = layout.datum, layout.sums, layout.pairs
    s = [v.e.gen(k) for k in range(n)]
    width = m.e.n

    images = []
    for k in range(n):
        for p in range(width):
            images.append(tp.odot(s[k], m.e.gen(p)))
    for c in e.central.gens():
        parts = sums.unpack(c)
        acc = res.e.zero()
        for k in range(n):
            acc = acc + tp.odot(s[k], m.e.central_element(parts[k]))
        for t, (i, j) in enumerate(pairs):
            acc = acc + tp.bar(v.cross(s[j], s[i]), parts[n + t])
        for l in range(n):
            acc = acc + tp.bar(v.H(s[l]), parts[n + len(pairs) + l])
        images.append(acc)
    alpha_e = Nil2Hom(e, res.e, images)

    ee_sum = direct_sum([m.ee] * v.ee.rank)
    ee = ee_sum.group
    rows = []
    for x in ee.gens():
        parts = ee_sum.unpack(x)
        rows.append(res.ee.add(*[tp.pair(v.ee.gen(r), part) for r, part in enumerate(parts)]))
    alpha_ee = FgabHom(ee, res.ee, rows)
    inv_e, inv_ee = alpha_e.inverse(), alpha_ee.inverse()

    p = CentralHom(ee, e, [inv_e(res.P(alpha_ee(a))) for a in ee.gens()], check=False)
    h = QuadraticMap.from_function(
        e, ee,
        lambda x: inv_ee(res.H(alpha_e(x))),
        lambda x, y: inv_ee(res.cross(alpha_e(x), alpha_e(y))),
    )
    square = SquareGroup(e, ee, p, h, kind="closed", label=f"V({n}) (.) {m.label}", params={"n": n})
    iso = SgMorphism(square, res, alpha_e, alpha_ee)
    cf = _finish("vn", square, tp, iso)
    cf.summary["ee.copies"] = str(n * n + 2 * n)
    return cf


def _require_abelian(a: SquareGroup, what: str) -> None:
    if not a.is_abelian():
        raise ShapeMismatchError(f"{what}: {a.label} is not an abelian square group")


def tensor_ab_sq(a: SquareGroup, b: SquareGroup) -> ClosedForm:
    """``A (.) B`` for abelian ``A`` as a pushout of abelian groups.

    ``(A (.) B)_e`` is the pushout of ``A_e (x) Coker(P^B)`` and
    ``A_ee (x) B_ee / (Id + T (x) T)`` over ``A_ee (x) Coker(P^B)``.
    """
    _require_abelian(a, "tensor_ab_sq")
    tp = tensor(a, b)
    res = tp.result
    ae, cb = a.e.abelianization, b.coker
    t1 = FgabTensor(ae.group, cb.group)
    t3, tt = tp.ee_tensor, tp.tt
    quot, quot_proj = t3.group.quotient([t3.group.add(w, tt(w)) for w in t3.group.gens()])
    sums = direct_sum([t1.group, quot])
    delta = b.derived.delta
    rels = []
    for x in a.ee.gens():
        pa = ae(a.P(x))
        for c in cb.group.gens():
            rels.append(sums.pack([t1.pair(pa, c), quot.neg(quot_proj(t3.pair(x, delta(c))))]))
    group, proj = sums.group.quotient(rels)
    e = Nil2Datum.abelian(group)

    def lift(g) -> tuple:
        return tuple(sums.unpack(sums.group.reduce(group.to_gens(g))))

    p = CentralHom(t3.group, e, [e.element(list(proj(sums.pack([t1.group.zero(), quot_proj(w)])))) for w in t3.group.gens()], check=False)
    values, images = [], []
    for g in group.gens():
        u, w = lift(g)
        w_lift = t3.group.reduce(quot.to_gens(w))
        value = [t3.group.sub(w_lift, tt(w_lift))]
        image = res.P(w_lift)
        for (i, j), k in t1.decompose(u).items():
            x, y = ae.lift(ae.group.gen(i)), cb.lift(cb.group.gen(j))
            value.append(t3.group.scale(k, t3.pair(a.H(x), delta(cb.group.gen(j)))))
            image = image + k * tp.odot(x, y)
        values.append(t3.group.add(*value))
        images.append(image)
    zero = t3.group.zero()
    h = QuadraticMap(e, t3.group, values, [[zero] * group.rank for _ in range(group.rank)])
    square = SquareGroup(e, t3.group, p, h, kind="closed", label=f"{a.label} (.) {b.label} (pushout)")
    iso = SgMorphism.from_images(square, res, images, list(t3.group.gens()))
    cf = _finish("ab_sq", square, tp, iso)
    cf.summary["quadratic"] = str(a.is_quadratic_z_module() and square.is_quadratic_z_module())
    return cf


def tensor_qz(a: SquareGroup, b: SquareGroup) -> ClosedForm:
    """``A (.) B ~= E(A_ee (x) B_ee, T (x) T) + Coker(P^A) (x) Coker(P^B)`` for abelian ``A``
    and a quadratic Z-module ``B``."""
    _require_abelian(a, "tensor_qz")
    if not b.is_quadratic_z_module():
        raise ShapeMismatchError(f"tensor_qz: {b.label} is not a quadratic Z-module")
    tp = tensor(a, b)
    res = tp.result
    t3 = tp.ee_tensor
    invol = e_involution(t3.group, tp.tt)
    ca, cb = a.coker, b.coker
    tc = FgabTensor(ca.group, cb.group)
    prod = product(invol, from_abelian(tc.group))
    square = prod.square
    coker = invol.params["coker"]
    pl, pr = prod.projections

    images = []
    for w in square.e.word_gens():
        image = res.P(t3.group.reduce(coker.to_gens(pl(w).v)))
        for (i, j), k in tc.decompose(pr(w).v).items():
            image = image + k * tp.odot(ca.lift(ca.group.gen(i)), cb.lift(cb.group.gen(j)))
        images.append(image)
    rows = [pl.fee(x) for x in square.ee.gens()]
    iso = SgMorphism.from_images(square, res, images, rows)
    cf = _finish("qz", square, tp, iso)
    cf.summary["quadratic"] = str(square.is_quadratic_z_module())
    return cf


def znil_monoidal(left: Sequence[str], right: Sequence[str]) -> ClosedForm:
    """``Z_nil[S] (.) Z_nil[S'] ~= Z_nil[S x S']`` through ``(s, s') -> s (.) s'``."""
    left, right = tuple(left), tuple(right)
    ml, mr = znil_set(left), znil_set(right)
    tp = tensor(ml, mr)
    res = tp.result
    pairs = [(i, j) for i in range(len(left)) for j in range(len(right))]
    square = znil_set([f"{left[i]}.{right[j]}" for i, j in pairs])
    kl, kr, kk = len(left), len(right), len(pairs)
    lattice = [tp.odot(ml.e.gen(i), mr.e.gen(j)) for i, j in pairs]
    fe = Nil2Hom.from_lattice_images(square.e, res.e, lattice)
    rows = []
    for p in range(kk):
        for q in range(kk):
            (i, j), (i2, j2) = pairs[p], pairs[q]
            rows.append(tp.pair(ml.ee.gen(i * kl + i2), mr.ee.gen(j * kr + j2)))
    iso = SgMorphism(square, res, fe, FgabHom(square.ee, res.ee, rows))
    cf = _finish("znil", square, tp, iso)
    cf.summary["ee.rank"] = str(square.ee.rank)
    return cf


def abelian_closure_report(a: SquareGroup, b: SquareGroup) -> CheckReport:
    """For abelian ``A`` the product is abelian; for quadratic ``A`` it is quadratic."""
    report = CheckReport(title=f"abelian closure {a.label}, {b.label}")
    res = tensor(a, b).result
    if a.is_abelian():
        report.add("closure.abelian", res.is_abelian(), res.label)
        if a.is_quadratic_z_module():
            report.add("closure.quadratic", res.is_quadratic_z_module(), res.label)
    else:
        report.skip("closure.abelian", f"{a.label} is not abelian")
    return report


CLOSED_FORMS = {
    "atensor": tensor_atensor,
    "zq": tensor_zq,
    "vn": tensor_vn,
    "ab_sq": tensor_ab_sq,
    "qz": tensor_qz,
    "znil": znil_monoidal,
}
