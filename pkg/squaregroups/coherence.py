"""Triple tensor products and the coherence of the symmetric monoidal structure.

``A (.) B (.) C`` is presented on symbols ``x (.) y (.) z`` over word
generators with central bars ``P(a (x) b (x) c)``; ``alpha`` and ``beta``
identify it with both bracketings, and the associator is
``beta^-1 o alpha``.
"""

from typing import Callable, List, Optional, Sequence, Tuple

from .checks import CheckReport
from .constructors import znil
from .nil2 import Nil2Element
from .sqcore import SgMorphism, SquareGroup, check_inverse_pair
from .tensor import (
    SymbolicProduct, SymbolPresentation, Term, extend_word, structure_report, symbol_names, symmetry,
    t_hom, tensor, tensor_morphism, unit_left, unit_right, word_of,
)
from .utils import setup_logger, shared_cache
from .zalgebra import FgabHom, Vector, tensor_hom


logger = setup_logger(__name__)


AssocBuilder = Callable[[SquareGroup, SquareGroup, SquareGroup], SgMorphism]


class TripleTensor(SymbolicProduct):
    """``A (.) B (.) C`` with the maps to and from both bracketings.

    Attributes:
        factors: ``(A, B, C)``
        left_product: ``(A (.) B) (.) C`` as a TensorProduct
        right_product: ``A (.) (B (.) C)`` as a TensorProduct
        result: The triple product; ``result.ee`` is ``(A_ee (x) B_ee) (x) C_ee``
    """

    def __init__(self, a: SquareGroup, b: SquareGroup, c: SquareGroup):
        self.factors = (a, b, c)
        self.ab = tensor(a, b)
        self.bc = tensor(b, c)
        self.left_product = tensor(self.ab.result, c)
        self.right_product = tensor(a, self.bc.result)
        self.t_ab = self.ab.ee_tensor
        self.t_bc = self.bc.ee_tensor
        self.t3 = self.left_product.ee_tensor
        self.xs, self.ys, self.zs = a.word_gens(), b.word_gens(), c.word_gens()
        qb, qc = len(self.ys), len(self.zs)
        self.shape = (len(self.xs), qb, qc)
        ee = self.t3.group
        ttt = tensor_hom(self.ab.tt, t_hom(c), self.t3, self.t3)
        self.ttt = ttt

        def commutator(i: int, j: int) -> Vector:
            (g, h, l), (g2, h2, l2) = self.unravel(i), self.unravel(j)
            return self.pair3(a.cross(self.xs[g], self.xs[g2]), b.cross(self.ys[h], self.ys[h2]),
                              c.cross(self.zs[l], self.zs[l2]))

        names = symbol_names(a.e.word_names(), b.e.word_names(), c.e.word_names())
        self.level = level = SymbolPresentation(names, ee, [ee.sub(w, ttt(w)) for w in ee.gens()], commutator)
        d = level.datum

        relators: List[Nil2Element] = []
        for g, x in enumerate(self.xs):
            xx = a.cross(x, x)
            for h, y in enumerate(self.ys):
                yy = b.cross(y, y)
                for _, word in c.e.relators:
                    relators.append(self._lin_z_word(g, h, word))
                for w in c.ee.gens():
                    relators.append(self._lin_z(g, h, c.P(w)) - level.central(self.pair3(xx, yy, w)))
            for l, z in enumerate(self.zs):
                hz = c.H(z)
                for _, word in b.e.relators:
                    relators.append(extend_word(
                        b, word, lambda h, g=g, l=l: self._sym(g, h, l),
                        lambda u, xx=xx, hz=hz: level.central(self.pair3(xx, u, hz)), d,
                    ))
                for w in b.ee.gens():
                    relators.append(self._yz(g, b.P(w), z) - level.central(self.pair3(xx, w, c.delta(z))))
        for h, y in enumerate(self.ys):
            for l, z in enumerate(self.zs):
                hyz = self.h_yz(y, z)
                for _, word in a.e.relators:
                    relators.append(extend_word(
                        a, word, lambda g, h=h, l=l: self._sym(g, h, l),
                        lambda u, hyz=hyz: level.central(self.pair_a_bc(u, hyz)), d,
                    ))
                for w in a.ee.gens():
                    relators.append(self._elem3_presented(a.P(w), y, z)
                                    - level.central(self.pair3(w, b.delta(y), c.delta(z))))

        def sym_value(i: int) -> Vector:
            g, h, l = self.unravel(i)
            return self.h_symbol(self.xs[g], self.ys[h], self.zs[l])

        def sym_cross(i: int, j: int) -> Vector:
            return commutator(i, j)

        self.result = level.finish(
            relators, sym_value, sym_cross, lambda w: ee.add(w, ttt(w)),
            kind="tensor", label=f"({a.label} (.) {b.label} (.) {c.label})", params={"factors": self.factors},
        )
        logger.debug(f"triple tensor {self.result.label}: {len(names)} symbols, {len(relators)} relators")

    # -- indexing -------------------------------------------------------------

    def unravel(self, i: int) -> Tuple[int, int, int]:
        _, qb, qc = self.shape
        return i // (qb * qc), (i // qc) % qb, i % qc

    def _sym(self, g: int, h: int, l: int) -> Nil2Element:
        _, qb, qc = self.shape
        return self.level.gen((g * qb + h) * qc + l)

    # -- ee-level -------------------------------------------------------------

    def pair3(self, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> Vector:
        """``(a (x) b) (x) c``."""
        return self.t3.pair(self.t_ab.pair(a, b), c)

    def pair_a_bc(self, a: Sequence[int], v: Sequence[int]) -> Vector:
        """``a (x) v`` for ``v`` in ``B_ee (x) C_ee``, moved to ``(A_ee (x) B_ee) (x) C_ee``."""
        _, b, c = self.factors
        ee = self.t3.group
        return ee.combine([
            (k, self.pair3(a, b.ee.gen(i), c.ee.gen(j))) for (i, j), k in self.t_bc.decompose(v).items()
        ])

    def h_yz(self, y: Nil2Element, z: Nil2Element) -> Vector:
        """``H(y (.) z) = (y|y)_H (x) H(z) + H(y) (x) Delta(z)``."""
        _, b, c = self.factors
        return self.t_bc.group.add(self.t_bc.pair(b.cross(y, y), c.H(z)), self.t_bc.pair(b.H(y), c.delta(z)))

    def h_symbol(self, x: Nil2Element, y: Nil2Element, z: Nil2Element) -> Vector:
        a, b, c = self.factors
        return self.t3.group.add(
            self.pair3(a.cross(x, x), b.cross(y, y), c.H(z)),
            self.pair3(a.cross(x, x), b.H(y), c.delta(z)),
            self.pair3(a.H(x), b.delta(y), c.delta(z)),
        )

    # -- e-level --------------------------------------------------------------

    def _lin_z_word(self, g: int, h: int, word) -> Nil2Element:
        acc = self.level.datum.zero()
        for l, k in word:
            if k:
                acc = acc + k * self._sym(g, h, l)
        return acc

    def _lin_z(self, g: int, h: int, z: Nil2Element) -> Nil2Element:
        return self._lin_z_word(g, h, word_of(self.factors[2].e, z))

    def _yz(self, g: int, y: Nil2Element, z: Nil2Element) -> Nil2Element:
        a, b, c = self.factors
        x = self.xs[g]
        xx, hz = a.cross(x, x), c.H(z)
        return extend_word(
            b, word_of(b.e, y),
            lambda h: self._lin_z(g, h, z),
            lambda u: self.level.central(self.pair3(xx, u, hz)),
            self.level.datum,
        )

    def _elem3_presented(self, x: Nil2Element, y: Nil2Element, z: Nil2Element) -> Nil2Element:
        a = self.factors[0]
        hyz = self.h_yz(y, z)
        return extend_word(
            a, word_of(a.e, x),
            lambda g: self._yz(g, y, z),
            lambda u: self.level.central(self.pair_a_bc(u, hyz)),
            self.level.datum,
        )

    def elem3(self, x: Nil2Element, y: Nil2Element, z: Nil2Element) -> Nil2Element:
        """``x (.) y (.) z``."""
        return self.level.project(self._elem3_presented(x, y, z))

    def bar3(self, w: Sequence[int]) -> Nil2Element:
        return self.result.P(w)

    def symbol(self, g: int, h: int, l: int) -> Nil2Element:
        return self.elem3(self.xs[g], self.ys[h], self.zs[l])

    def expand(self, x: Nil2Element) -> List[Term]:
        return self.level.expand(x, self.unravel)

    # -- comparison maps --------------------------------------------------------

    def alpha(self) -> SgMorphism:
        """``(A (.) B) (.) C -> A (.) B (.) C``.

        ``(x (.) y) (.) z -> x (.) y (.) z``, ``(a # b) (.) z -> a # b # Delta(z)``
        and ``(a (x) b) # c -> a # b # c``.
        """
        outer, ab = self.left_product, self.ab
        c = self.factors[2]
        res = self.result

        def on_symbol(g: int, l: int) -> Nil2Element:
            z = self.zs[l]
            hz, dz = c.H(z), c.delta(z)
            return ab.extend_first(
                outer.xs[g],
                lambda i, j: self.elem3(self.xs[i], self.ys[j], z),
                lambda w: res.P(self.t3.pair(w, dz)),
                lambda u: res.P(self.t3.pair(u, hz)),
                res.e,
            )

        return outer.lift_morphism(res, on_symbol, FgabHom.identity(self.t3.group))

    def alpha_inverse(self) -> SgMorphism:
        outer, ab = self.left_product, self.ab
        return self.lift_morphism(
            outer.result,
            lambda g, h, l: outer.odot(ab.odot(self.xs[g], self.ys[h]), self.zs[l]),
            FgabHom.identity(self.t3.group),
        )

    def beta_ee(self) -> FgabHom:
        """``a (x) (b (x) c) -> (a (x) b) (x) c``."""
        a = self.factors[0]
        outer = self.right_product
        return outer.ee_tensor.lift(
            self.t3.group, lambda i, j: self.pair_a_bc(a.ee.gen(i), self.bc.result.ee.gen(j)),
        )

    def beta(self) -> SgMorphism:
        """``A (.) (B (.) C) -> A (.) B (.) C``.

        ``x (.) (y (.) z) -> x (.) y (.) z`` and ``x (.) (b # c) -> (x|x)_H # b # c``.
        """
        outer, bc = self.right_product, self.bc
        a = self.factors[0]
        res = self.result

        def on_symbol(g: int, j: int) -> Nil2Element:
            x = self.xs[g]
            xx = a.cross(x, x)
            return bc.evaluate(
                outer.ys[j],
                lambda h, l: self.elem3(x, self.ys[h], self.zs[l]),
                lambda w: res.P(self.pair_a_bc(xx, w)),
                res.e,
            )

        return outer.lift_morphism(res, on_symbol, self.beta_ee())

    def beta_inverse(self) -> SgMorphism:
        outer, bc = self.right_product, self.bc
        return self.lift_morphism(
            outer.result,
            lambda g, h, l: outer.odot(self.xs[g], bc.odot(self.ys[h], self.zs[l])),
            self.beta_ee().inverse(),
        )

    def relations_report(self) -> CheckReport:
        """Re-check the symbol relations and ``H`` on generators."""
        a, b, c = self.factors
        res = self.result
        report = CheckReport(title=f"relations of {res.label}")
        xs, ys, zs = self.xs, self.ys, self.zs
        bad = None
        for x in xs:
            for y in ys:
                for z in zs:
                    for z2 in zs:
                        if self.elem3(x, y, z + z2) != self.elem3(x, y, z) + self.elem3(x, y, z2):
                            bad = "linear_z"
                    for y2 in ys:
                        expected = (self.elem3(x, y, z) + self.elem3(x, y2, z)
                                    + res.P(self.pair3(a.cross(x, x), b.cross(y2, y), c.H(z))))
                        if self.elem3(x, y + y2, z) != expected:
                            bad = "quadratic_y"
                    if res.H(self.elem3(x, y, z)) != self.h_symbol(x, y, z):
                        bad = "h_symbol"
                    if bad:
                        report.add("triple.relations", False, f"{bad} at {x!r}, {y!r}, {z!r}")
                        return report
        report.add("triple.relations", True)
        return report


@shared_cache
def triple_tensor(a: SquareGroup, b: SquareGroup, c: SquareGroup) -> TripleTensor:
    """``A (.) B (.) C`` with ``alpha`` and ``beta`` checked against their inverses.

    Raises:
        ValidationError: If either comparison map fails to be an isomorphism
    """
    t = TripleTensor(a, b, c)
    report = CheckReport(title=f"triple tensor {t.result.label}")
    report.merge(t.relations_report())
    report.merge(check_inverse_pair(t.alpha(), t.alpha_inverse()), prefix="alpha.")
    report.merge(check_inverse_pair(t.beta(), t.beta_inverse()), prefix="beta.")
    report.raise_for_failure()
    return t


def alpha_iso(a: SquareGroup, b: SquareGroup, c: SquareGroup) -> SgMorphism:
    return triple_tensor(a, b, c).alpha()


def beta_iso(a: SquareGroup, b: SquareGroup, c: SquareGroup) -> SgMorphism:
    return triple_tensor(a, b, c).beta()


def assoc_iso(a: SquareGroup, b: SquareGroup, c: SquareGroup) -> SgMorphism:
    """The associator ``(A (.) B) (.) C -> A (.) (B (.) C)``."""
    t = triple_tensor(a, b, c)
    return t.beta_inverse().compose(t.alpha())


def assoc_inverse(a: SquareGroup, b: SquareGroup, c: SquareGroup) -> SgMorphism:
    t = triple_tensor(a, b, c)
    return t.alpha_inverse().compose(t.beta())


def alpha_formula_report(t: TripleTensor, alpha: Optional[SgMorphism] = None) -> CheckReport:
    """Compare a candidate ``alpha`` with its defining values on generators."""
    alpha = alpha or t.alpha()
    a, b, c = t.factors
    ab, outer = t.ab, t.left_product
    res = t.result
    report = CheckReport(title=f"alpha on {res.label}")
    an, bn, cn = a.e.word_names(), b.e.word_names(), c.e.word_names()

    witness = None
    for g, x in enumerate(t.xs):
        for h, y in enumerate(t.ys):
            for l, z in enumerate(t.zs):
                if alpha(outer.odot(ab.odot(x, y), z)) != t.elem3(x, y, z):
                    witness = f"({an[g]}@{bn[h]})@{cn[l]}"
                    break
    report.add("alpha.symbol", witness is None, witness)

    witness = None
    for i, u in enumerate(a.ee.gens()):
        for j, v in enumerate(b.ee.gens()):
            for l, z in enumerate(t.zs):
                if alpha(outer.odot(ab.bar(u, v), z)) != res.P(t.pair3(u, v, c.delta(z))):
                    witness = f"(ee{i}#ee{j})@{cn[l]}"
                    break
            for k, w in enumerate(c.ee.gens()):
                if alpha(outer.bar(ab.pair(u, v), w)) != res.P(t.pair3(u, v, w)):
                    witness = f"(ee{i}*ee{j})#ee{k}"
                    break
    report.add("alpha.bar", witness is None, witness)
    return report


# ---------------------------------------------------------------------------
# Coherence diagrams


def _compare(report: CheckReport, name: str, left: SgMorphism, right: SgMorphism) -> bool:
    problem = left.mismatch(right)
    return report.add(name, problem is None, problem)


def verify_pentagon(
    a: SquareGroup, b: SquareGroup, c: SquareGroup, d: SquareGroup,
    assoc: AssocBuilder = assoc_iso,
) -> CheckReport:
    """Both paths ``((A B) C) D -> A (B (C D))`` agree on generators."""
    ab, bc, cd = tensor(a, b).result, tensor(b, c).result, tensor(c, d).result
    top = assoc(a, b, cd).compose(assoc(ab, c, d))
    first = tensor_morphism(assoc(a, b, c), SgMorphism.identity(d))
    middle = assoc(a, bc, d)
    last = tensor_morphism(SgMorphism.identity(a), assoc(b, c, d))
    bottom = last.compose(middle.compose(first))
    report = CheckReport(title=f"pentagon {a.label}, {b.label}, {c.label}, {d.label}")
    _compare(report, "pentagon", top, bottom)
    return report


def verify_hexagons(a: SquareGroup, b: SquareGroup, c: SquareGroup, assoc: AssocBuilder = assoc_iso) -> CheckReport:
    """The two hexagons relating the associator and ``tau``."""
    report = CheckReport(title=f"hexagons {a.label}, {b.label}, {c.label}")
    bc, ab = tensor(b, c).result, tensor(a, b).result

    left = assoc(b, c, a).compose(symmetry(tensor(a, bc)).compose(assoc(a, b, c)))
    tau_ab = tensor_morphism(symmetry(tensor(a, b)), SgMorphism.identity(c))
    right = tensor_morphism(SgMorphism.identity(b), symmetry(tensor(a, c))).compose(
        assoc(b, a, c).compose(tau_ab)
    )
    _compare(report, "hexagon.first", left, right)

    inv = lambda x, y, z: assoc(x, y, z).inverse()
    left = inv(c, a, b).compose(symmetry(tensor(ab, c)).compose(inv(a, b, c)))
    tau_ca = tensor_morphism(symmetry(tensor(a, c)), SgMorphism.identity(b))
    right = tau_ca.compose(inv(a, c, b).compose(tensor_morphism(SgMorphism.identity(a), symmetry(tensor(b, c)))))
    _compare(report, "hexagon.second", left, right)
    return report


def verify_triangle(a: SquareGroup, b: SquareGroup, z: Optional[SquareGroup] = None,
                    assoc: AssocBuilder = assoc_iso) -> CheckReport:
    """``(Id (.) iota) o assoc = kappa (.) Id`` on ``(A (.) Z_nil) (.) B``."""
    z = z or znil()
    report = CheckReport(title=f"triangle {a.label}, {b.label}")
    kappa = unit_right(tensor(a, z))
    iota = unit_left(tensor(z, b))
    left = tensor_morphism(SgMorphism.identity(a), iota).compose(assoc(a, z, b))
    right = tensor_morphism(kappa, SgMorphism.identity(b))
    _compare(report, "triangle", left, right)
    return report


def verify_symmetry(a: SquareGroup, b: SquareGroup) -> CheckReport:
    """``tau o tau = Id``."""
    tp, rev = tensor(a, b), tensor(b, a)
    report = CheckReport(title=f"symmetry {a.label}, {b.label}")
    _compare(report, "tau.involution", symmetry(rev, tp).compose(symmetry(tp, rev)), SgMorphism.identity(tp.result))
    return report


def verify_units(a: SquareGroup, z: Optional[SquareGroup] = None) -> CheckReport:
    """``iota`` and ``kappa`` are inverse to their sections, and ``kappa = iota o tau``."""
    z = z or znil()
    report = CheckReport(title=f"units {a.label}")
    left, right = tensor(z, a), tensor(a, z)
    report.merge(structure_report(left), prefix="left.")
    report.merge(structure_report(right), prefix="right.")
    _compare(report, "unit.symmetry", unit_left(left).compose(symmetry(right, left)), unit_right(right))
    return report


def coherence_report(factors: Sequence[SquareGroup], checks: Sequence[str] = ("pentagon", "hexagon", "triangle")) -> CheckReport:
    """Run the requested coherence checks on the leading factors."""
    report = CheckReport(title="coherence")
    if "pentagon" in checks and len(factors) >= 4:
        report.merge(verify_pentagon(*factors[:4]))
    if "hexagon" in checks and len(factors) >= 3:
        report.merge(verify_hexagons(*factors[:3]))
    if "triangle" in checks and len(factors) >= 2:
        report.merge(verify_triangle(*factors[:2]))
    if "symmetry" in checks and len(factors) >= 2:
        report.merge(verify_symmetry(*factors[:2]))
    if "unit" in checks and factors:
        report.merge(verify_units(factors[0]))
    return report
