"""Abelian groups with cosymmetry and the square groups they define.

A cosymmetry on ``A`` is a map ``delta: A -> Sym^2(A)`` with
``delta(a + b) = delta(a) + delta(b) + ab``. The functor ``J`` turns
``(A, delta)`` into a square group whose cross-effect
``Coker(P) (x) Coker(P) -> M_ee`` is an isomorphism, and ``Psi`` goes back.
"""

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

from .boxcomp import sigma
from .checks import CheckReport
from .constructors import znil_set
from .nil2 import CentralHom, Nil2Datum, Nil2Element, Nil2Hom, QuadraticMap
from .sqcore import SgMorphism, SquareGroup
from .tensor import tensor
from .utils import ValidationError, binom2, setup_logger
from .zalgebra import FgAbelianGroup, FgabHom, FgabTensor, Vector, tensor_swap


logger = setup_logger(__name__)


# ---------------------------------------------------------------------------
# Symmetric squares


class Sym2Group:
    """``Sym^2(A) = A (x) A / (a (x) b - b (x) a)`` with its projection.

    Attributes:
        base: ``A``
        tensor: ``A (x) A``
        group: ``Sym^2(A)``
        proj: ``A (x) A -> Sym^2(A)``
    """

    def __init__(self, base: FgAbelianGroup, square: Optional[FgabTensor] = None):
        self.base = base
        self.tensor = square if square is not None else FgabTensor(base, base)
        r = base.rank
        rels = [
            self.tensor.group.sub(self.tensor.pair_gens(i, j), self.tensor.pair_gens(j, i))
            for i in range(r) for j in range(i + 1, r)
        ]
        self.group, self.proj = self.tensor.group.quotient(rels)

    def product(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.proj(self.tensor.pair(a, b))

    def decompose(self, s: Sequence[int]) -> Dict[Tuple[int, int], int]:
        """Coefficients of some ``sum k g_p g_q`` equal to ``s``."""
        if not any(s):
            return {}
        lifted = self.proj.preimage(s)
        return self.tensor.decompose(lifted)

    def lift(self, s: Sequence[int]) -> Vector:
        """A preimage in ``A (x) A``, zero for zero."""
        if not any(s):
            return self.tensor.group.zero()
        return self.proj.preimage(s)

    def induced(self, f: FgabHom, target: "Sym2Group") -> FgabHom:
        """``Sym^2(f)``."""
        gens = self.base.gens()

        def value(s: Vector) -> Vector:
            terms = [(k, target.product(f(gens[p]), f(gens[q]))) for (p, q), k in self.decompose(s).items()]
            return target.group.combine(terms)

        return FgabHom.from_function(self.group, target.group, value)

    def __repr__(self) -> str:
        return f"Sym2({self.base}) = {self.group}"


def quadratic_extension(sym: Sym2Group, elems: Sequence[Vector], values: Sequence[Vector],
                        coeffs: Sequence[int]) -> Vector:
    """``delta(sum k_p e_p)`` from ``delta(e_p)`` and the law ``delta(a+b) = delta(a)+delta(b)+ab``."""
    terms = []
    for p, k in enumerate(coeffs):
        if not k:
            continue
        terms.append((k, values[p]))
        terms.append((binom2(k), sym.product(elems[p], elems[p])))
        for q in range(p + 1, len(coeffs)):
            if coeffs[q]:
                terms.append((k * coeffs[q], sym.product(elems[p], elems[q])))
    return sym.group.combine(terms)


# ---------------------------------------------------------------------------
# Cosymmetry objects


@dataclass
class CosymmetryObject:
    """``(A, delta)`` with ``delta`` given on the canonical generators of ``A``.

    Attributes:
        group: ``A``
        sym: ``Sym^2(A)``
        values: ``delta(g_i)`` in ``Sym^2(A)``
        lifts: Chosen preimages of ``values`` in ``A (x) A``
    """

    group: FgAbelianGroup
    sym: Sym2Group
    values: List[Vector]
    lifts: List[Vector] = field(default_factory=list)
    label: str = ""

    def __post_init__(self):
        self.values = [self.sym.group.reduce(v) for v in self.values]
        if len(self.values) != self.group.rank:
            raise ValueError(f"expected {self.group.rank} generator values, got {len(self.values)}")
        if not self.lifts:
            self.lifts = [self.sym.lift(v) for v in self.values]
        self.label = self.label or f"({self.group}, delta)"

    def delta(self, x: Sequence[int]) -> Vector:
        return quadratic_extension(self.sym, self.group.gens(), self.values, self.group.reduce(x))

    def lift_delta(self, v: Sequence[int]) -> Vector:
        """``s(v)`` in ``A (x) A`` for integer coordinates ``v``; ``pi(s(v)) = delta(v)``."""
        t = self.sym.tensor
        terms = []
        for p, k in enumerate(v):
            if not k:
                continue
            terms.append((k, self.lifts[p]))
            terms.append((binom2(k), t.pair_gens(p, p)))
            for q in range(p + 1, len(v)):
                if v[q]:
                    terms.append((k * v[q], t.pair_gens(p, q)))
        return t.group.combine(terms)


def cosymmetry(a: FgAbelianGroup, values: Optional[Sequence[Sequence[int]]] = None,
               label: Optional[str] = None, check: bool = True) -> CosymmetryObject:
    """Build ``(A, delta)``; ``values`` default to zero.

    Raises:
        ValidationError: If ``check`` and the law fails
    """
    sym = Sym2Group(a)
    if values is None:
        values = [sym.group.zero()] * a.rank
    x = CosymmetryObject(a, sym, [list(v) for v in values], label=label or "")
    if check:
        cos_validate(x).raise_for_failure()
    return x


def cos_unit() -> CosymmetryObject:
    """``(Z, binom(-, 2))``."""
    return cosymmetry(FgAbelianGroup.free(1), label="(Z, binom)")


def cos_free(names: Sequence[str]) -> CosymmetryObject:
    """``(Z[S], 0)``."""
    return cosymmetry(FgAbelianGroup.free(len(names), list(names)), label="(Z[" + ",".join(names) + "], 0)")


def cos_validate(x: CosymmetryObject) -> CheckReport:
    """The cosymmetry law on generators, on pairs and across torsion wrap-around."""
    report = CheckReport(title=f"cosymmetry {x.label}")
    a, sym = x.group, x.sym
    gens = a.gens()

    bad = None
    for i, d in enumerate(a.invariants):
        if not d:
            continue
        forced = sym.group.combine([(d, x.values[i]), (binom2(d), sym.product(gens[i], gens[i]))])
        if any(forced):
            bad = f"{d} * delta(g{i}) + C({d}, 2) g{i}g{i} = {forced}"
            break
    report.add("cos.torsion", bad is None, bad)

    samples = list(gens) + [a.neg(g) for g in gens] + [a.add(g, h) for g in gens for h in gens]
    bad = None
    for u, v in cartesian(samples, samples):
        lhs = x.delta(a.add(u, v))
        rhs = sym.group.add(x.delta(u), x.delta(v), sym.product(u, v))
        if lhs != rhs:
            bad = f"({u}, {v})"
            break
    report.add("cos.law", bad is None, bad)

    bad = next((i for i, w in enumerate(x.lifts) if list(sym.proj(w)) != list(x.values[i])), None)
    report.add("cos.lifts", bad is None, None if bad is None else f"g{bad}")
    return report


def find_cosymmetries(a: FgAbelianGroup, limit: int = 4096) -> List[CosymmetryObject]:
    """All cosymmetries on a finite ``A`` (empty when the structure is obstructed).

    Raises:
        ValueError: If ``Sym^2(A)`` is infinite or the search exceeds ``limit``
    """
    sym = Sym2Group(a)
    if not sym.group.is_finite():
        raise ValueError(f"Sym^2({a}) is infinite")
    candidates = list(sym.group.elements())
    if len(candidates) ** a.rank > limit:
        raise ValueError(f"{len(candidates) ** a.rank} candidate structures exceed the limit {limit}")
    found = []
    for values in cartesian(candidates, repeat=a.rank):
        x = CosymmetryObject(a, sym, [list(v) for v in values])
        if cos_validate(x).ok:
            found.append(x)
    logger.debug(f"{len(found)} cosymmetries on {a}")
    return found


def cos_obstruction_report(a: FgAbelianGroup) -> CheckReport:
    report = CheckReport(title=f"cosymmetries on {a}")
    found = find_cosymmetries(a)
    report.add("cos.exists", bool(found), None if found else f"no map {a} -> Sym^2 satisfies the law")
    report.summary["count"] = str(len(found))
    return report


# ---------------------------------------------------------------------------
# Monoidal structure


def _star_left(t: FgabTensor, sym: Sym2Group, right_sym: Sym2Group, a: Vector, s: Vector) -> Vector:
    """``a * (bb') = (a (x) b)(a (x) b')``."""
    hs = right_sym.base.gens()
    return sym.group.combine([
        (k, sym.product(t.pair(a, hs[p]), t.pair(a, hs[q]))) for (p, q), k in right_sym.decompose(s).items()
    ])


def _star_right(t: FgabTensor, sym: Sym2Group, left_sym: Sym2Group, s: Vector, b: Vector) -> Vector:
    """``(aa') * b = (a (x) b)(a' (x) b)``."""
    gs = left_sym.base.gens()
    return sym.group.combine([
        (k, sym.product(t.pair(gs[p], b), t.pair(gs[q], b))) for (p, q), k in left_sym.decompose(s).items()
    ])


def _star_both(t: FgabTensor, sym: Sym2Group, left_sym: Sym2Group, right_sym: Sym2Group,
               s: Vector, u: Vector) -> Vector:
    """``(aa') * (bb') = (a (x) b)(a' (x) b') + (a' (x) b)(a (x) b')``."""
    gs, hs = left_sym.base.gens(), right_sym.base.gens()
    terms = []
    for (p, q), k in left_sym.decompose(s).items():
        for (r, w), l in right_sym.decompose(u).items():
            terms.append((k * l, sym.product(t.pair(gs[p], hs[r]), t.pair(gs[q], hs[w]))))
            terms.append((k * l, sym.product(t.pair(gs[q], hs[r]), t.pair(gs[p], hs[w]))))
    return sym.group.combine(terms)


@dataclass
class CosTensor:
    """``(A (x) B, delta_{A (x) B})`` with the tensor data it was built from."""

    left: CosymmetryObject
    right: CosymmetryObject
    tensor: FgabTensor
    result: CosymmetryObject


def cos_tensor_product(x: CosymmetryObject, y: CosymmetryObject) -> CosTensor:
    t = FgabTensor(x.group, y.group)
    sym = Sym2Group(t.group)
    gs, hs = x.group.gens(), y.group.gens()
    rb = y.group.rank

    pair_values = []
    pair_elems = []
    for g in range(t.group.ngens):
        i, j = g // rb, g % rb
        da, db = x.values[i], y.values[j]
        value = sym.group.add(
            _star_left(t, sym, y.sym, gs[i], db),
            _star_right(t, sym, x.sym, da, hs[j]),
            sym.group.neg(_star_both(t, sym, x.sym, y.sym, da, db)),
        )
        pair_values.append(value)
        pair_elems.append(t.pair_gens(i, j))

    values = [
        quadratic_extension(sym, pair_elems, pair_values, t.group.to_gens(c))
        for c in t.group.gens()
    ]
    result = CosymmetryObject(t.group, sym, values, label=f"{x.label} (x) {y.label}")
    return CosTensor(x, y, t, result)


def cos_tensor(x: CosymmetryObject, y: CosymmetryObject) -> CosymmetryObject:
    """``delta(a (x) b) = a * delta(b) + delta(a) * b - delta(a) * delta(b)``."""
    return cos_tensor_product(x, y).result


def _preserves_delta(f: FgabHom, x: CosymmetryObject, y: CosymmetryObject) -> Optional[str]:
    """First generator where ``Sym^2(f) delta_x != delta_y f``."""
    sf = x.sym.induced(f, y.sym)
    for i, g in enumerate(x.group.gens()):
        if list(sf(x.delta(g))) != list(y.delta(f(g))):
            return f"g{i}"
    return None


def cos_tensor_report(x: CosymmetryObject, y: CosymmetryObject, z: Optional[CosymmetryObject] = None) -> CheckReport:
    """Validity of ``x (x) y`` with its unit, symmetry and (given ``z``) associativity isomorphisms."""
    report = CheckReport(title=f"{x.label} (x) {y.label}")
    xy = cos_tensor_product(x, y)
    report.merge(cos_validate(xy.result), prefix="tensor.")

    yx = cos_tensor_product(y, x)
    swap = xy.tensor.lift(yx.tensor.group, lambda i, j: yx.tensor.pair_gens(j, i))
    bad = _preserves_delta(swap, xy.result, yx.result)
    report.add("tensor.symmetry", bad is None, bad)

    unit = cos_unit()
    ux = cos_tensor_product(unit, x)
    lam = ux.tensor.lift(x.group, lambda i, j: x.group.gen(j))
    report.add("tensor.unit_iso", lam.is_iso())
    bad = _preserves_delta(lam, ux.result, x)
    report.add("tensor.unit_left", bad is None, bad)

    if z is not None:
        left = cos_tensor_product(xy.result, z)
        yz = cos_tensor_product(y, z)
        right = cos_tensor_product(x, yz.result)

        def assoc(i: int, j: int) -> Vector:
            terms = [
                (k, right.tensor.pair(x.group.gen(a), yz.tensor.pair(y.group.gen(b), z.group.gen(j))))
                for (a, b), k in xy.tensor.decompose(xy.tensor.group.gen(i)).items()
            ]
            return right.tensor.group.combine(terms)

        alpha = left.tensor.lift(right.tensor.group, assoc)
        report.add("tensor.assoc_iso", alpha.is_iso())
        bad = _preserves_delta(alpha, left.result, right.result)
        report.add("tensor.associative", bad is None, bad)
    report.summary["group"] = str(xy.result.group)
    return report


# ---------------------------------------------------------------------------
# J and Psi


def J(x: CosymmetryObject, label: Optional[str] = None) -> SquareGroup:
    """The square group of ``(A, delta)``.

    ``M_e`` is the set of pairs ``(a, u)`` with ``pi(u) = delta(a)`` under
    ``(a, u) + (b, w) = (a + b, u + w + a (x) b)``; ``M_ee = A (x) A``,
    ``H(a, u) = u`` and ``P(t) = (0, t - swap(t))``. The e-level is stored
    as an extension of ``A`` by ``Ker(pi)``, the pair ``(a, u)`` sitting at
    ``u - s(a)``.
    """
    a, sym = x.group, x.sym
    t = sym.tensor
    n = a.rank
    kgroup, kincl = sym.proj.kernel()

    def to_k(u: Sequence[int]) -> Vector:
        value = kincl.preimage(u)
        if value is None:
            raise ValidationError("element outside Ker(Sym^2 projection)", check="cos.j_kernel", witness=list(u))
        return value

    beta = [[kgroup.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            beta[i][j] = to_k(t.group.sub(t.pair_gens(i, j), t.pair_gens(j, i)))
    relations = []
    for i, d in enumerate(a.invariants):
        if d:
            coords = [0] * n
            coords[i] = d
            relations.append((coords, kgroup.neg(to_k(x.lift_delta(coords)))))
    names = list(a.labels) if a.labels and len(a.labels) == n else [f"a{i}" for i in range(n)]
    e = Nil2Datum(names, kgroup, beta, relations)
    ee = t.group

    def u_part(w: Nil2Element) -> Vector:
        return t.group.add(x.lift_delta(w.v), kincl(w.c))

    def a_part(w: Nil2Element) -> Vector:
        return a.reduce(list(w.v))

    h = QuadraticMap.from_function(e, ee, u_part, lambda w, z: t.pair(a_part(w), a_part(z)))
    swap = tensor_swap(t, t)
    images = [e.element([0] * n, to_k(ee.sub(g, swap(g)))) for g in ee.gens()]
    p = CentralHom(ee, e, images, check=False)
    m = SquareGroup(e, ee, p, h, kind="cosym", label=label or f"J{x.label}", params={"cosymmetry": x})
    logger.debug(f"J{x.label}: Ker(pi) = {kgroup}, ee = {ee}")
    return m



def is_sg_sigma(m: SquareGroup) -> bool:
    """``(-|-)_H: Coker(P) (x) Coker(P) -> M_ee`` is an isomorphism."""
    d = m.derived
    if not d.cross_tensor.group.isomorphic(m.ee):
        return False
    return d.cross_hom.is_iso()


def Psi(m: SquareGroup) -> CosymmetryObject:
    """``(Coker(P), delta)`` with ``delta`` induced by ``H`` through the cross-effect.

    Raises:
        ValidationError: If ``m`` is not in the subcategory where the
            cross-effect is an isomorphism
    """
    if not is_sg_sigma(m):
        raise ValidationError(
            f"{m.label}: the cross-effect Coker(P) (x) Coker(P) -> M_ee is not an isomorphism",
            check="psi.sg_sigma",
            witness=f"Coker(P) = {m.coker.group}, M_ee = {m.ee}",
        )
    d = m.derived
    phi_inv = d.cross_hom.inverse()
    sym = Sym2Group(d.coker.group, d.cross_tensor)
    lifts = [list(phi_inv(m.H(d.coker.lift(g)))) for g in d.coker.group.gens()]
    x = CosymmetryObject(d.coker.group, sym, [list(sym.proj(w)) for w in lifts], lifts, label=f"Psi({m.label})")
    cos_validate(x).raise_for_failure()
    return x


def psi_comparison(m: SquareGroup) -> SgMorphism:
    """The isomorphism ``J(Psi(M)) -> M``.

    Lattice generators go to lifts of the ``Coker(P)`` generators, central
    generators ``t - swap(t)`` to ``P(t)`` and the ee-level through the
    cross-effect.
    """
    x = Psi(m)
    j = J(x)
    d = m.derived
    t = x.sym.tensor
    anti = FgabHom.identity(t.group) - tensor_swap(t, t)
    _, kincl = x.sym.proj.kernel()

    def central_image(c: Vector) -> Nil2Element:
        pre = anti.preimage(kincl(c))
        if pre is None:
            raise ValidationError("kernel element is not antisymmetrized", check="psi.comparison", witness=list(c))
        return m.P(d.cross_hom(pre))

    lattice = [d.coker.lift(g) for g in x.group.gens()]
    fe = Nil2Hom.from_lattice_images(j.e, m.e, lattice, central_image)
    ee_rows = [d.cross_hom(g) for g in j.ee.gens()]
    return SgMorphism(j, m, fe, FgabHom(j.ee, m.ee, ee_rows))


def j_znil_comparison(names: Sequence[str]) -> SgMorphism:
    """``Z_nil[S] -> J(Z[S], 0)``: generators to generators, ``s (x) t -> t (x) s``."""
    z = znil_set(names)
    x = cos_free(names)
    j = J(x)
    t = x.sym.tensor
    k = len(names)
    fe = Nil2Hom.from_lattice_images(z.e, j.e, [j.e.gen(i) for i in range(k)])
    rows = [t.pair_gens(g % k, g // k) for g in range(k * k)]
    return SgMorphism(z, j, fe, FgabHom(z.ee, j.ee, rows))


# ---------------------------------------------------------------------------
# Compatibility with the products


def j_report(x: CosymmetryObject) -> CheckReport:
    """``J(x)`` lies in the cross-effect subcategory, ``Coker(P) ~= A`` and ``Psi J(x) ~= x``."""
    report = CheckReport(title=f"J{x.label}")
    m = J(x)
    report.add("j.sg_sigma", is_sg_sigma(m))
    report.add("j.coker", m.coker.group.isomorphic(x.group), detail=f"{m.coker.group} vs {x.group}")
    back = Psi(m)
    report.add("j.psi_group", back.group.isomorphic(x.group))
    report.add("j.psi_sym", back.sym.group.isomorphic(x.sym.group))
    comparison = psi_comparison(m)
    report.add("j.comparison_iso", comparison.is_iso())
    return report


def coker_criterion_report(f: SgMorphism) -> CheckReport:
    """For ``f`` between objects of the subcategory: ``f`` iso iff ``Coker(P)`` map iso."""
    report = CheckReport(title=f"iso criterion for {f.source.label} -> {f.target.label}")
    m, n = f.source, f.target
    report.add("criterion.sg_sigma", is_sg_sigma(m) and is_sg_sigma(n))
    if not report.ok:
        return report
    induced = FgabHom.from_function(m.coker.group, n.coker.group, lambda g: n.coker(f.fe(m.coker.lift(g))))
    report.add("criterion.agrees", f.is_iso() == induced.is_iso(), detail=f"f iso={f.is_iso()}, coker iso={induced.is_iso()}")
    return report


def products_report(m: SquareGroup, n: SquareGroup) -> CheckReport:
    """For ``m, n`` in the subcategory, both products stay there and ``sigma`` is an iso."""
    report = CheckReport(title=f"{m.label}, {n.label} in the cross-effect subcategory")
    report.add("products.inputs", is_sg_sigma(m) and is_sg_sigma(n))
    if not report.ok:
        return report
    s = sigma(m, n)
    report.add("products.box", is_sg_sigma(s.source))
    report.add("products.tensor", is_sg_sigma(s.target))
    report.add("products.sigma_iso", s.is_iso())
    return report


def monoidal_report(x: CosymmetryObject, y: CosymmetryObject) -> CheckReport:
    """``J(x) (.) J(y)`` against ``J(x (x) y)``: shape, subcategory and cosymmetry."""
    report = CheckReport(title=f"J{x.label} (.) J{y.label}")
    product = tensor(J(x), J(y)).result
    expected = J(cos_tensor(x, y))
    report.add("monoidal.sg_sigma", is_sg_sigma(product))
    report.add("monoidal.coker", product.coker.group.isomorphic(expected.coker.group))
    report.add("monoidal.ee", product.ee.isomorphic(expected.ee), detail=f"{product.ee} vs {expected.ee}")
    if report.ok:
        back = Psi(product)
        report.add(
            "monoidal.cosymmetry",
            back.sym.group.isomorphic(expected.params["cosymmetry"].sym.group),
        )
    return report
