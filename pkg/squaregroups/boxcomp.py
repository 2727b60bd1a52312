"""Pre-square groups and the composition product.

A pre-square group keeps the data ``(M_e, M_ee, T, {-,-}, P)`` of a square
group without ``H``. This module builds

* the forgetful functor ``psg(M) = (M_e, M_ee, HP - Id, (-|-)_H, P)``,
* the quadratic functors ``S -> S (.) M`` on finite pointed sets
  (``GammaModel``) and ``G -> G (x) M`` on nil2 groups (``GroupTensor``),
* the composition product ``M [] N`` for a square group or pre-square
  group ``M`` and a square group ``N`` (``BoxProduct``),
* the comparison ``sigma: M [] N -> M (.) N``.

All three groups are presented on symbols ``s@x`` with a central group
``Z = (A (x) A (x) E) / ([t,s] (x) c ~ [s,t] (x) T c)``; the generator
``[s,t] (x) c`` of ``Z`` is written ``pair3(s, t, c)``. Commutators of
symbols follow ``[s (x) x, t (x) y] = [t,s] (x) {x,y}``.
"""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .checks import CheckReport
from .constructors import a_tensor, znil
from .nil2 import (
    AbelianImage, CentralHom, Nil2Datum, Nil2Element, Nil2Hom, QuadraticMap, Syllables,
    nil2_product, relator_descent_report,
)
from .sqcore import SgMorphism, SquareGroup, n_star
from .tensor import SymbolPresentation, SymbolicProduct, Term, symbol_names, t_hom, tensor, tensor_morphism, unit_left, unit_right, word_of
from .utils import UnsupportedInstanceError, ValidationError, binom2, setup_logger, shared_cache, shared_property
from .zalgebra import FgAbelianGroup, FgabHom, FgabTensor, Vector, direct_sum, tensor_hom


logger = setup_logger(__name__)


Bracket = Callable[[Nil2Element, Nil2Element], Vector]
PointedMap = Tuple[Optional[int], ...]


# ---------------------------------------------------------------------------
# Pre-square groups


@dataclass(eq=False)
class PreSquareGroup:
    """``M_e x M_e --{-,-}--> M_ee --T--> M_ee --P--> M_e``.

    Attributes:
        e: The e-level nil2 datum
        ee: The ee-level abelian group
        t: The involution ``T``
        bracket: Bilinear pairing ``M_e x M_e -> M_ee``
        p: ``P`` as a central homomorphism
        label: Display name
        origin: The square group this was forgotten from, if any
    """

    e: Nil2Datum
    ee: FgAbelianGroup
    t: FgabHom
    bracket: Bracket
    p: CentralHom
    label: str = "psg"
    origin: Optional[SquareGroup] = None

    def P(self, a: Sequence[int]) -> Nil2Element:
        return self.p.apply(a)

    def T(self, a: Sequence[int]) -> Vector:
        return self.t(a)

    def word_gens(self) -> List[Nil2Element]:
        return self.e.word_gens()

    @shared_property
    def coker(self) -> AbelianImage:
        if self.origin is not None:
            return self.origin.coker
        return self.e.abelian_quotient([self.P(a) for a in self.ee.gens()])

    def __repr__(self) -> str:
        return f"PreSquareGroup({self.label}: e={list(self.e.names)}, ee={self.ee})"


def validate_psg(m: PreSquareGroup) -> CheckReport:
    """Check ``T^2 = Id``, ``PT = P``, ``T{x,y} + {y,x} = 0``, ``P{x,y} = [x,y]``,
    ``{x, Pa} = 0`` and bilinearity of the bracket on generators."""
    report = CheckReport(title=f"pre-square group {m.label}")
    ee = m.ee
    gens = m.word_gens()
    names = m.e.word_names()
    pairs = [(f"({names[g]}, {names[h]})", x, y) for g, x in enumerate(gens) for h, y in enumerate(gens)]

    def first(name: str, cases, predicate) -> None:
        witness = next((label for label, *args in cases if not predicate(*args)), None)
        report.add(name, witness is None, witness)

    report.add("psg.t_involution", m.t.compose(m.t).equals(FgabHom.identity(ee)))
    first("psg.pt", [(f"ee{i}", a) for i, a in enumerate(ee.gens())], lambda a: m.P(m.T(a)) == m.P(a))
    first("psg.t_bracket", pairs, lambda x, y: not any(ee.add(m.T(m.bracket(x, y)), m.bracket(y, x))))
    first("psg.p_bracket", pairs, lambda x, y: m.P(m.bracket(x, y)) == m.e.commutator(x, y))
    first("psg.bracket_p", [
        (f"({names[g]}, P ee{i})", x, a) for g, x in enumerate(gens) for i, a in enumerate(ee.gens())
    ], lambda x, a: not any(m.bracket(x, m.P(a))))
    triples = [
        (f"({names[g]}+{names[g2]}, {names[h]})", x, x2, y)
        for g, x in enumerate(gens) for g2, x2 in enumerate(gens) for h, y in enumerate(gens)
    ]
    first("psg.bilinear_left", triples,
          lambda x, x2, y: ee.reduce(m.bracket(x + x2, y)) == ee.add(m.bracket(x, y), m.bracket(x2, y)))
    first("psg.bilinear_right", triples,
          lambda x, x2, y: ee.reduce(m.bracket(y, x + x2)) == ee.add(m.bracket(y, x), m.bracket(y, x2)))
    return report


def psg_forget(m: SquareGroup) -> PreSquareGroup:
    """``psg(M) = (M_e, M_ee, T = HP - Id, (-|-)_H, P)``."""
    return PreSquareGroup(m.e, m.ee, t_hom(m), m.cross, m.p, label=f"psg({m.label})", origin=m)


def psg_from_abelian(a: FgAbelianGroup, label: Optional[str] = None) -> PreSquareGroup:
    """The abelian group ``A`` as a pre-square group with ``M_ee = 0``."""
    e = Nil2Datum.abelian(a)
    ee = FgAbelianGroup.trivial()
    return PreSquareGroup(
        e, ee, FgabHom.identity(ee), lambda x, y: ee.zero(), CentralHom.zero(ee, e), label=label or str(a),
    )


def psg_lift_report(m: PreSquareGroup, h: QuadraticMap) -> CheckReport:
    """``(M_e, M_ee, P, H)`` is a square group with ``psg = m`` iff
    ``{x,y} = (x|y)_H`` and ``Id + T = HP``."""
    report = CheckReport(title=f"lift of {m.label}")
    if h.source is not m.e or h.target.rank != m.ee.rank:
        report.add("psg.lift_shape", False, "H is not defined on the levels of the pre-square group")
        return report
    ee = m.ee
    gens = m.word_gens()
    names = m.e.word_names()
    bad = next((
        f"({names[g]}, {names[k]})"
        for g, x in enumerate(gens) for k, y in enumerate(gens)
        if ee.reduce(m.bracket(x, y)) != ee.reduce(h.cross_effect(x, y))
    ), None)
    report.add("psg.lift_bracket", bad is None, bad)
    bad = next((f"ee{i}" for i, a in enumerate(ee.gens()) if ee.add(a, m.T(a)) != ee.reduce(h(m.P(a)))), None)
    report.add("psg.lift_hp", bad is None, bad)
    return report


def square_from_psg(m: PreSquareGroup, h: QuadraticMap, label: Optional[str] = None) -> SquareGroup:
    """Supply ``H`` to a pre-square group.

    Raises:
        ValidationError: If ``H`` does not reproduce the bracket and ``T``
    """
    psg_lift_report(m, h).raise_for_failure()
    return SquareGroup(m.e, m.ee, m.p, h, label=label or m.label)


def psg_equal_report(a: PreSquareGroup, b: PreSquareGroup) -> CheckReport:
    """Compare two pre-square groups on the same levels generator by generator."""
    report = CheckReport(title=f"{a.label} = {b.label}")
    if not report.add("psg_equal.levels", a.e is b.e and a.ee.invariants == b.ee.invariants,
                      "different underlying levels"):
        return report
    ee = a.ee
    gens = a.word_gens()
    names = a.e.word_names()
    report.add("psg_equal.t", a.t.equals(FgabHom(ee, ee, b.t.rows, check=False)))
    bad = next((f"ee{i}" for i, x in enumerate(ee.gens()) if a.P(x) != b.P(x)), None)
    report.add("psg_equal.p", bad is None, bad)
    bad = next((
        f"({names[g]}, {names[k]})"
        for g, x in enumerate(gens) for k, y in enumerate(gens)
        if ee.reduce(a.bracket(x, y)) != ee.reduce(b.bracket(x, y))
    ), None)
    report.add("psg_equal.bracket", bad is None, bad)
    return report


class PsgMorphism:
    """Morphism of pre-square groups given by its two levels."""

    def __init__(self, source: PreSquareGroup, target: PreSquareGroup, fe: Nil2Hom, fee: FgabHom, check: bool = True):
        if fe.source is not source.e or fe.target is not target.e:
            raise ValueError("e-level map does not match the pre-square groups")
        self.source = source
        self.target = target
        self.fe = fe
        self.fee = fee
        if check:
            self.check_report().raise_for_failure()

    def check_report(self) -> CheckReport:
        """Check ``f P = P f``, ``f T = T f`` and ``f {x,y} = {f x, f y}``."""
        s, t = self.source, self.target
        report = CheckReport(title="pre-square group morphism")
        report.merge(self.fe.check_report(), prefix="morphism.")
        bad = next((f"ee{i}" for i, a in enumerate(s.ee.gens()) if self.fe(s.P(a)) != t.P(self.fee(a))), None)
        report.add("psg_morphism.p", bad is None, bad)
        bad = next((f"ee{i}" for i, a in enumerate(s.ee.gens()) if self.fee(s.T(a)) != t.T(self.fee(a))), None)
        report.add("psg_morphism.t", bad is None, bad)
        gens = s.word_gens()
        names = s.e.word_names()
        bad = next((
            f"({names[g]}, {names[k]})"
            for g, x in enumerate(gens) for k, y in enumerate(gens)
            if self.fee(s.bracket(x, y)) != t.ee.reduce(t.bracket(self.fe(x), self.fe(y)))
        ), None)
        report.add("psg_morphism.bracket", bad is None, bad)
        return report

    def __call__(self, x: Nil2Element) -> Nil2Element:
        return self.fe(x)


def n_star_psg(m: PreSquareGroup, n: int) -> PsgMorphism:
    """``n*`` on ``psg(M)``: ``x -> n x + C(n, 2) P H(x)`` and ``n^2`` on the ee-level.

    Raises:
        UnsupportedInstanceError: If ``m`` was not forgotten from a square group
    """
    if m.origin is None:
        raise UnsupportedInstanceError(f"n* on {m.label} needs the quadratic map of a square group")
    fee = FgabHom.identity(m.ee).scaled(n * n)
    return PsgMorphism(m, m, n_star(m.origin, n), fee)


# ---------------------------------------------------------------------------
# Symbol groups


class SymbolGroup(SymbolicProduct):
    """Nil2 group on symbols ``s@x`` (``s`` in an index family, ``x`` a word
    generator of ``right``) and central symbols ``[s,t] (x) c``.

    Relations: ``s@x`` is linear in ``x``, ``[s,s] (x) a = s@P(a)`` and the
    commutator rule. Subclasses add relators to ``self.relators`` and call
    ``finish``.

    Attributes:
        index_names: Names of the index family
        a_group: The abelian group ``A`` the index family maps to
        ab_vectors: Image of each index in ``A``
        right: The pre-square group in the second slot
        zt: ``(A (x) A) (x) right.ee``
        datum: The finished group (after ``finish``)
    """

    def __init__(
        self,
        index_names: Sequence[str],
        a_group: FgAbelianGroup,
        ab_vectors: Sequence[Sequence[int]],
        right: PreSquareGroup,
    ):
        self.index_names = list(index_names)
        self.a_group = a_group
        self.ab_vectors = [a_group.reduce(v) for v in ab_vectors]
        self.right = right
        self.ys = right.e.word_gens()
        self.q = len(self.ys)
        self.aa = FgabTensor(a_group, a_group)
        self.zt = FgabTensor(self.aa.group, right.ee)
        ee = right.ee

        z_relations = [
            self.zt.group.sub(self.pair3(a_group.gen(j), a_group.gen(i), c), self.pair3(a_group.gen(i), a_group.gen(j), right.T(c)))
            for i in range(a_group.rank) for j in range(a_group.rank) for c in ee.gens()
        ]

        def commutator(a: int, b: int) -> Vector:
            (s, h), (t, h2) = divmod(a, self.q), divmod(b, self.q)
            return self.pair3(self.ab_vectors[t], self.ab_vectors[s], right.bracket(self.ys[h], self.ys[h2]))

        names = symbol_names(self.index_names, right.e.word_names())
        self.level = SymbolPresentation(names, self.zt.group, z_relations, commutator)
        self.relators: List[Nil2Element] = []
        for s in range(len(self.index_names)):
            for _, word in right.e.relators:
                self.relators.append(self.lin_word(s, word))
            for a in ee.gens():
                self.relators.append(
                    self.lin(s, right.P(a)) - self.level.central(self.pair3(self.ab_vectors[s], self.ab_vectors[s], a))
                )
        self.datum: Optional[Nil2Datum] = None

    def finish(self) -> Nil2Datum:
        relators = [r for r in self.relators if not r.is_zero()]
        self.level.quotient = quot = self.level.presentation.finish(relators)
        self.datum = quot.datum
        logger.debug(
            f"symbol group: {len(self.index_names)} x {self.q} symbols, {len(relators)} relators, "
            f"abelianization {self.datum.abelianization.group}"
        )
        return self.datum

    # -- presentation level -------------------------------------------------

    def pair3(self, u: Sequence[int], v: Sequence[int], c: Sequence[int]) -> Vector:
        """``[u, v] (x) c`` in ``(A (x) A) (x) E``."""
        return self.zt.pair(self.aa.pair(u, v), c)

    def sym_pres(self, s: int, h: int) -> Nil2Element:
        return self.level.gen(s * self.q + h)

    def lin_word(self, s: int, word: Syllables) -> Nil2Element:
        acc = self.level.datum.zero()
        for h, k in word:
            if k:
                acc = acc + k * self.sym_pres(s, h)
        return acc

    def lin(self, s: int, y: Nil2Element) -> Nil2Element:
        return self.lin_word(s, word_of(self.right.e, y))

    # -- quotient level -----------------------------------------------------

    def symbol(self, s: int, h: int) -> Nil2Element:
        return self.level.project(self.sym_pres(s, h))

    def central(self, w: Sequence[int]) -> Nil2Element:
        """The central symbol of ``w`` in ``(A (x) A) (x) E``."""
        return self.level.project(self.level.central(w))

    def expand(self, x: Nil2Element) -> List[Term]:
        return self.level.expand(x, lambda i: divmod(i, self.q))

    def z_hom(self, target: "SymbolGroup", f_a: FgabHom, f_ee: FgabHom) -> FgabHom:
        """``(f_a (x) f_a) (x) f_ee`` between the central symbol groups."""
        aa_map = tensor_hom(f_a, f_a, self.aa, target.aa)
        return tensor_hom(aa_map, f_ee, self.zt, target.zt)

    def induced_hom(
        self,
        target: "SymbolGroup",
        on_symbol: Callable[[int, int], Nil2Element],
        on_bar: Callable[[Vector], Nil2Element],
        check: bool = True,
    ) -> Nil2Hom:
        images = [self.evaluate(w, on_symbol, on_bar, target.datum) for w in self.datum.word_gens()]
        return Nil2Hom(self.datum, target.datum, images, check=check)

    @property
    def generators(self) -> Dict[str, Nil2Element]:
        out: Dict[str, Nil2Element] = {}
        ynames = self.right.e.word_names()
        for s, sname in enumerate(self.index_names):
            for h, yname in enumerate(ynames):
                out[f"{sname}@{yname}"] = self.symbol(s, h)
        a = self.a_group
        for i in range(a.rank):
            for j in range(a.rank):
                for c, cv in enumerate(self.right.ee.gens()):
                    out[f"[a{i},a{j}]@ee{c}"] = self.central(self.pair3(a.gen(i), a.gen(j), cv))
        return out


def _central_sequence_report(prefix: str, kappa: Nil2Hom, r: Nil2Hom) -> CheckReport:
    """``0 -> K --kappa--> G --r--> Q -> 0`` is exact with ``K`` central."""
    report = CheckReport(title=f"{prefix} sequence")
    report.add(f"{prefix}.injective", kappa.is_injective())
    report.add(f"{prefix}.surjective", r.is_surjective())
    report.add(f"{prefix}.central", all(kappa.target.is_central(x) for x in kappa.images))
    report.add(f"{prefix}.composite", all(r(x).is_zero() for x in kappa.images))
    bad = next((kappa.target.format(k) for k in r.kernel_generators() if kappa.preimage(k) is None), None)
    report.add(f"{prefix}.middle", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# Quadratic functors on finite pointed sets


class GammaModel(SymbolGroup):
    """``S (.) M`` for a finite pointed set ``S = {*} + names``.

    ``*`` acts as zero: ``* (.) x = 0`` and ``[*, s] (.) a = 0``.
    """

    def __init__(self, names: Sequence[str], m: PreSquareGroup):
        names = tuple(names)
        a = FgAbelianGroup.free(len(names), list(names))
        super().__init__(names, a, [a.gen(i) for i in range(a.rank)], m)
        self.names = names
        self.psg = m
        self.finish()

    def odot(self, s: Optional[int], x: Nil2Element) -> Nil2Element:
        """``s (.) x``; ``None`` is the base point."""
        if s is None:
            return self.datum.zero()
        return self.level.project(self.lin(s, x))

    def bracket_symbol(self, s: Optional[int], t: Optional[int], a: Sequence[int]) -> Nil2Element:
        """``[s, t] (.) a``."""
        if s is None or t is None:
            return self.datum.zero()
        return self.central(self.pair3(self.a_group.gen(s), self.a_group.gen(t), a))

    def induced(self, f: PointedMap, target: "GammaModel") -> Nil2Hom:
        """``F(f)`` for a pointed map given by the image of each non-base point."""
        if target.psg is not self.psg:
            raise ValueError("pointed maps act between models of the same pre-square group")
        if len(f) != len(self.names):
            raise ValueError(f"pointed map needs {len(self.names)} values, got {len(f)}")
        ta = target.a_group
        f_a = FgabHom(self.a_group, ta, [ta.gen(t) if t is not None else ta.zero() for t in f], check=False)
        zh = self.z_hom(target, f_a, FgabHom.identity(self.psg.ee))
        return self.induced_hom(
            target,
            lambda s, h: target.odot(f[s], self.ys[h]),
            lambda w: target.central(zh(w)),
        )

    def __repr__(self) -> str:
        return f"GammaModel({{*,{','.join(self.names)}}} (.) {self.psg.label})"


def gamma_model(names: Sequence[str], m: PreSquareGroup) -> GammaModel:
    return GammaModel(names, m)


def pointed_maps(a: int, b: int) -> List[PointedMap]:
    """All pointed maps ``[a] -> [b]``."""
    return [tuple(f) for f in cartesian([None, *range(b)], repeat=a)]


def compose_pointed(g: PointedMap, f: PointedMap) -> PointedMap:
    """``g o f``."""
    return tuple(g[i] if i is not None else None for i in f)


def gamma_model_report(m: PreSquareGroup) -> CheckReport:
    """Functoriality on pointed maps between ``[1]`` and ``[2]`` and recovery of ``m``.

    Checks that ``[1] (.) M = M_e``, that ``M_ee --kappa--> [2] (.) M -->
    M_e x M_e`` is a central extension for ``kappa(a) = [2,1] (.) a``, and
    that the bracket, ``T`` and ``P`` come back as the commutator
    ``[F(i1) x, F(i2) y]``, the swap and the fold.
    """
    report = CheckReport(title=f"Gamma-model of {m.label}")
    models = {1: GammaModel(["1"], m), 2: GammaModel(["1", "2"], m)}
    f1, f2 = models[1], models[2]

    one = Nil2Hom(m.e, f1.datum, [f1.odot(0, x) for x in m.word_gens()])
    report.add("gamma.one", one.is_iso(), None if one.is_iso() else str(f1.datum.abelianization.group))

    maps: Dict[Tuple[int, int, PointedMap], Nil2Hom] = {}
    bad = None
    for a, b in ((1, 2), (2, 1), (2, 2), (1, 1)):
        for f in pointed_maps(a, b):
            try:
                maps[(a, b, f)] = models[a].induced(f, models[b])
            except ValidationError as exc:
                bad = bad or f"[{a}]->[{b}] {f}: {exc}"
    report.add("gamma.maps", bad is None, bad)
    if bad is not None:
        return report

    bad = next((
        f"[{a}]" for a in (1, 2)
        if maps[(a, a, tuple(range(a)))].mismatch(Nil2Hom.identity(models[a].datum)) is not None
    ), None)
    report.add("gamma.identity", bad is None, bad)

    bad = None
    for a, b, c in ((1, 2, 2), (2, 2, 1), (2, 2, 2), (1, 2, 1), (2, 1, 2)):
        for f in pointed_maps(a, b):
            for g in pointed_maps(b, c):
                lhs = maps[(a, c, compose_pointed(g, f))]
                problem = lhs.mismatch(maps[(b, c, g)].compose(maps[(a, b, f)]))
                if problem is not None and bad is None:
                    bad = f"{g} o {f}: {problem}"
    report.add("gamma.composition", bad is None, bad)

    ee = m.ee
    kappa = Nil2Hom(Nil2Datum.abelian(ee), f2.datum, [f2.bracket_symbol(1, 0, a) for a in ee.gens()])
    prod = nil2_product(f1.datum, f1.datum)
    r1, r2 = maps[(2, 1, (0, None))], maps[(2, 1, (None, 0))]
    r = Nil2Hom(f2.datum, prod.datum, [prod.pair(r1(w), r2(w)) for w in f2.datum.word_gens()])
    report.merge(_central_sequence_report("gamma.extension", kappa, r))

    i1, i2 = maps[(1, 2, (0,))], maps[(1, 2, (1,))]
    gens, names = m.word_gens(), m.e.word_names()
    bad = next((
        f"({names[g]}, {names[h]})"
        for g, x in enumerate(gens) for h, y in enumerate(gens)
        if f2.datum.commutator(i1(f1.odot(0, x)), i2(f1.odot(0, y))) != f2.bracket_symbol(1, 0, m.bracket(x, y))
    ), None)
    report.add("gamma.bracket", bad is None, bad)
    swap, fold = maps[(2, 2, (1, 0))], maps[(2, 1, (0, 0))]
    bad = next((f"ee{i}" for i, a in enumerate(ee.gens())
                if swap(f2.bracket_symbol(1, 0, a)) != f2.bracket_symbol(1, 0, m.T(a))), None)
    report.add("gamma.t", bad is None, bad)
    bad = next((f"ee{i}" for i, a in enumerate(ee.gens())
                if fold(f2.bracket_symbol(1, 0, a)) != f1.odot(0, m.P(a))), None)
    report.add("gamma.p", bad is None, bad)
    report.summary["F[2].abelianization"] = str(f2.datum.abelianization.group)
    return report


# ---------------------------------------------------------------------------
# Quadratic functors on nil2 groups


class GroupTensor(SymbolGroup):
    """``G (x) M`` on symbols ``g@x`` over word generators of ``G``.

    ``(g + h) (x) x = g (x) x + h (x) x + [g,h] (x) H(x)`` extends the symbols
    to all of ``G``; every relator of ``G`` is imposed through that rule.
    """

    def __init__(self, g: Nil2Datum, m: SquareGroup, finish: bool = True):
        ab = g.abelianization
        super().__init__(g.word_names(), ab.group, [ab(w) for w in g.word_gens()], psg_forget(m))
        self.group = g
        self.square = m
        self.ab = ab
        samples = self._samples()
        for _, word in g.relators:
            for y in samples:
                self.relators.append(self._extend_pres(word, y))
        if finish:
            self.finish()

    def _samples(self) -> List[Nil2Element]:
        ys = self.ys
        out = list(ys) + [2 * y for y in ys]
        out += [ys[h] + ys[h2] for h in range(len(ys)) for h2 in range(h + 1, len(ys))]
        return out

    def _extend_pres(self, word: Syllables, y: Nil2Element) -> Nil2Element:
        a = self.a_group
        hy = self.square.H(y)
        ee = self.square.ee
        acc = self.level.datum.zero()
        prefix = a.zero()
        for g, k in word:
            if not k:
                continue
            gv = self.ab_vectors[g]
            step = a.scale(k, gv)
            acc = acc + k * self.lin(g, y)
            acc = acc + self.level.central(self.pair3(gv, gv, ee.scale(binom2(k), hy)))
            acc = acc + self.level.central(self.pair3(prefix, step, hy))
            prefix = a.add(prefix, step)
        return acc

    def symbol_of(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """``x (x) y`` for arbitrary ``x`` in ``G`` and ``y`` in ``M_e``."""
        return self.level.project(self._extend_pres(word_of(self.group, x), y))

    def central_of(self, x: Nil2Element, y: Nil2Element, a: Sequence[int]) -> Nil2Element:
        """``[x, y] (x) a``."""
        return self.central(self.pair3(self.ab(x), self.ab(y), a))

    def map_from(self, f: Nil2Hom, target: "GroupTensor") -> Nil2Hom:
        """``f (x) M`` for a homomorphism ``f: G -> G'``."""
        if f.source is not self.group or f.target is not target.group or target.square is not self.square:
            raise ValueError("homomorphism does not match the group tensors")
        f_a = FgabHom.from_generator_images(self.a_group, target.a_group, [target.ab(x) for x in f.images])
        zh = self.z_hom(target, f_a, FgabHom.identity(self.square.ee))
        return self.induced_hom(
            target,
            lambda s, h: target.symbol_of(f.images[s], self.ys[h]),
            lambda w: target.central(zh(w)),
        )

    def __repr__(self) -> str:
        return f"GroupTensor({list(self.group.names)} (x) {self.square.label})"


def group_tensor(g: Nil2Datum, m: SquareGroup) -> GroupTensor:
    return GroupTensor(g, m)


def group_tensor_unit_report(m: SquareGroup) -> CheckReport:
    """``Z (x) M = M_e`` through ``x -> 1 (x) x``."""
    report = CheckReport(title=f"Z (x) {m.label}")
    gt = GroupTensor(Nil2Datum.free(["g"]), m)
    f = Nil2Hom(m.e, gt.datum, [gt.symbol(0, h) for h in range(gt.q)])
    report.add("group_tensor.unit", f.is_iso(), None if f.is_iso() else str(gt.datum.abelianization.group))
    return report


def group_tensor_nil_report(names: Sequence[str]) -> CheckReport:
    """``G (x) Z_nil = G^nil`` for the free group on ``names``."""
    report = CheckReport(title=f"<{','.join(names)}> (x) Z_nil")
    g = Nil2Datum.free(names)
    gt = GroupTensor(g, znil())
    f = Nil2Hom.from_lattice_images(g, gt.datum, [gt.symbol(s, 0) for s in range(g.n)])
    report.add("group_tensor.nil", f.is_iso(), None if f.is_iso() else str(gt.datum.abelianization.group))
    return report


def group_tensor_atensor_report(g: Nil2Datum, a: FgAbelianGroup) -> CheckReport:
    """``G (x) A^(x)`` is abelian and isomorphic to ``A (x) G^ab (x) G^ab``."""
    report = CheckReport(title=f"G (x) ({a})^(x)")
    gt = GroupTensor(g, a_tensor(a))
    gab = g.abelianization.group
    expected = FgabTensor(a, FgabTensor(gab, gab).group).group
    got = gt.datum.abelianization.group
    report.add("group_tensor.atensor_abelian", gt.datum.is_abelian())
    report.add("group_tensor.atensor_shape", got.isomorphic(expected), None if got.isomorphic(expected) else f"{got} vs {expected}")
    return report


def cross_effect_sequence_report(m: SquareGroup) -> CheckReport:
    """``0 -> X^ab (x) Y^ab (x) M_ee -> (X v Y) (x) M -> (X (x) M) x (Y (x) M) -> 0``
    for ``X = <s>`` and ``Y = <t>``."""
    report = CheckReport(title=f"cross-effect sequence of - (x) {m.label}")
    gx, gy, gxy = Nil2Datum.free(["s"]), Nil2Datum.free(["t"]), Nil2Datum.free(["s", "t"])
    tx, ty, txy = GroupTensor(gx, m), GroupTensor(gy, m), GroupTensor(gxy, m)
    px = Nil2Hom.from_lattice_images(gxy, gx, [gx.gen(0), gx.zero()])
    py = Nil2Hom.from_lattice_images(gxy, gy, [gy.zero(), gy.gen(0)])
    r1, r2 = txy.map_from(px, tx), txy.map_from(py, ty)
    prod = nil2_product(tx.datum, ty.datum)
    r = Nil2Hom(txy.datum, prod.datum, [prod.pair(r1(w), r2(w)) for w in txy.datum.word_gens()])
    s, t = gxy.gen(0), gxy.gen(1)
    kappa = Nil2Hom(Nil2Datum.abelian(m.ee), txy.datum, [txy.central_of(s, t, a) for a in m.ee.gens()])
    report.merge(_central_sequence_report("cross_effect", kappa, r))
    return report


def gamma_group_tensor_report(m: SquareGroup, sizes: Sequence[int] = (1, 2, 3)) -> CheckReport:
    """``S (.) psg(M) = <S> (x) M`` for ``|S| <= 3``, natural in ``S``.

    Naturality is checked along the swap and the fold of ``[2]``.
    """
    report = CheckReport(title=f"S (.) psg({m.label}) = <S> (x) M")
    pm = psg_forget(m)
    comparisons = {}
    for k in sizes:
        names = [str(i + 1) for i in range(k)]
        gm = GammaModel(names, pm)
        gt = GroupTensor(Nil2Datum.free(names), m)
        f_a = FgabHom(gm.a_group, gt.a_group, [gt.ab(gt.group.gen(s)) for s in range(k)], check=False)
        zh = gm.z_hom(gt, f_a, FgabHom.identity(m.ee))
        phi = gm.induced_hom(gt, lambda s, h, gt=gt: gt.symbol(s, h), lambda w, gt=gt, zh=zh: gt.central(zh(w)))
        comparisons[k] = (gm, gt, phi)
        report.add(f"gamma_tensor.iso[{k}]", phi.is_iso())
    if 1 in comparisons and 2 in comparisons:
        for label, f, b in (("swap", (1, 0), 2), ("fold", (0, 0), 1)):
            gm2, gt2, phi2 = comparisons[2]
            gmb, gtb, phib = comparisons[b]
            gamma_side = phib.compose(gm2.induced(f, gmb))
            images = [gtb.group.gen(t) for t in f]
            g_map = Nil2Hom.from_lattice_images(gt2.group, gtb.group, images)
            tensor_side = gt2.map_from(g_map, gtb).compose(phi2)
            problem = gamma_side.mismatch(tensor_side)
            report.add(f"gamma_tensor.natural_{label}", problem is None, problem)
    return report


# ---------------------------------------------------------------------------
# The composition product


class BoxProduct(GroupTensor):
    """``M [] N`` for a square group or pre-square group ``M`` and a square group ``N``.

    ``(M [] N)_e = (M_e (x) N) / ([x, Pa] (x) c)`` and ``(M [] N)_ee`` is the
    quotient of ``M_ee (x) Coker P_N  +  Coker P_M (x) Coker P_M (x) N_ee``
    by ``{x,y} (x) z ~ y (x) x (x) Delta(z)``.

    Attributes:
        left: ``M`` as given
        lp: ``M`` as a pre-square group
        n: ``N``
        ee: ``(M [] N)_ee``
        ee_sum: The two-summand direct sum presenting ``ee``
        result: A SquareGroup when ``M`` is one, else a PreSquareGroup
        psg: The pre-square group structure given by the formulas for ``T``
            and the bracket
    """

    def __init__(self, left: Union[SquareGroup, PreSquareGroup], n: SquareGroup):
        lp = left if isinstance(left, PreSquareGroup) else psg_forget(left)
        self.left = left
        self.lp = lp
        self.n = n
        super().__init__(lp.e, n, finish=False)
        for x in lp.word_gens():
            for a in lp.ee.gens():
                pa = self.ab(lp.P(a))
                for c in n.ee.gens():
                    self.relators.append(self.level.central(self.pair3(self.ab(x), pa, c)))
        self.finish()
        self.nsym = len(self.index_names) * self.q
        self._build_ee()
        report = CheckReport(title=f"composition product {self.label}")
        p_pres = self._p_presented(report)
        self.bracket_matrix = self._bracket_matrix()
        report.merge(self._bracket_descent())
        report.raise_for_failure()

        quot = self.level.quotient
        images = []
        for lift in self.ee.from_canonical:
            acc = self.level.datum.zero()
            for k, coeff in enumerate(lift):
                if coeff:
                    acc = acc + coeff * p_pres[k]
            images.append(quot.projection(acc))
        self.p = CentralHom(self.ee, self.datum, images)
        self.t = self.ee_hom(
            self.ee,
            lambda i, k: self.t1_elem(lp.T(lp.ee.gen(i)), self.cn.group.gen(k)),
            lambda i, j, c: self.t2_elem(self.cm.group.gen(j), self.cm.group.gen(i), n.T(n.ee.gen(c))),
        )
        self.psg = PreSquareGroup(self.datum, self.ee, self.t, self.bracket, self.p, label=self.label)
        if isinstance(left, PreSquareGroup):
            validate_psg(self.psg).raise_for_failure()
            self.result: Union[SquareGroup, PreSquareGroup] = self.psg
        else:
            self.result = self._square(left)
            psg_equal_report(psg_forget(self.result), self.psg).raise_for_failure()
        logger.debug(f"built {self.label}: e has {self.datum.n} lattice generators, ee = {self.ee}")

    @property
    def label(self) -> str:
        return f"({self.left.label} [] {self.n.label})"

    # -- ee-level -----------------------------------------------------------

    def _build_ee(self) -> None:
        lp, n = self.lp, self.n
        self.cm, self.cn = lp.coker, n.coker
        self.cm_lifts = [self.cm.lift(c) for c in self.cm.group.gens()]
        self.cn_lifts = [self.cn.lift(c) for c in self.cn.group.gens()]
        self.t1 = FgabTensor(lp.ee, self.cn.group)
        self.cc = FgabTensor(self.cm.group, self.cm.group)
        self.t2 = FgabTensor(self.cc.group, n.ee)
        self.ee_sum = direct_sum([self.t1.group, self.t2.group])
        delta = n.derived.delta
        rels = []
        for i, x in enumerate(self.cm_lifts):
            for j, y in enumerate(self.cm_lifts):
                for zb in self.cn.group.gens():
                    rels.append(self.ee_sum.pack([
                        self.t1.pair(lp.bracket(x, y), zb),
                        self.t2.group.neg(self.t2.pair(self.cc.pair_gens(j, i), delta(zb))),
                    ]))
        self.ee, self.ee_proj = self.ee_sum.group.quotient(rels)
        self.a_to_cm = FgabHom.from_generator_images(self.a_group, self.cm.group, [self.cm(w) for w in lp.word_gens()])

    def t1_elem(self, a: Sequence[int], zbar: Sequence[int]) -> Vector:
        """``a (x) z-bar``."""
        return self.ee_proj(self.ee_sum.pack([self.t1.pair(a, zbar), self.t2.group.zero()]))

    def t2_elem(self, xbar: Sequence[int], ybar: Sequence[int], c: Sequence[int]) -> Vector:
        """``x-bar (x) y-bar (x) c``."""
        return self.ee_proj(self.ee_sum.pack([self.t1.group.zero(), self.t2.pair(self.cc.pair(xbar, ybar), c)]))

    def _summand_terms(self, k: int) -> Tuple[Dict[Tuple[int, int], int], Dict[Tuple[int, int, int], int]]:
        t1v, t2v = self.ee_sum.unpack(self.ee_sum.group.gen(k))
        second: Dict[Tuple[int, int, int], int] = {}
        for (u, c), coeff in self.t2.decompose(t2v).items():
            for (i, j), c2 in self.cc.decompose(self.cc.group.gen(u)).items():
                second[(i, j, c)] = second.get((i, j, c), 0) + coeff * c2
        return self.t1.decompose(t1v), second

    def ee_hom(
        self,
        target: FgAbelianGroup,
        on_first: Callable[[int, int], Sequence[int]],
        on_second: Callable[[int, int, int], Sequence[int]],
    ) -> FgabHom:
        """Homomorphism out of ``ee`` given on ``ee_i (x) z_k`` and ``x_i (x) x_j (x) c``.

        Raises:
            ValidationError: If the values do not respect the relations
        """
        images = []
        for k in range(self.ee_sum.group.rank):
            first, second = self._summand_terms(k)
            terms = [(coeff, on_first(i, kk)) for (i, kk), coeff in first.items()]
            terms += [(coeff, on_second(i, j, c)) for (i, j, c), coeff in second.items()]
            images.append(target.combine(terms))
        return FgabHom.from_generator_images(self.ee, target, images)

    def _p_presented(self, report: CheckReport) -> List[Nil2Element]:
        """``P`` on the generators of ``ee_sum``, valued in the presentation datum."""
        lp, n = self.lp, self.n
        d = self.level.datum
        out = []
        for k in range(self.ee_sum.group.rank):
            first, second = self._summand_terms(k)
            acc = d.zero()
            for (i, kk), coeff in first.items():
                acc = acc + coeff * self._extend_pres(word_of(lp.e, lp.P(lp.ee.gen(i))), self.cn_lifts[kk])
            for (i, j, c), coeff in second.items():
                w = self.pair3(self.ab(self.cm_lifts[i]), self.ab(self.cm_lifts[j]), n.ee.gen(c))
                acc = acc + coeff * self.level.central(w)
            out.append(acc)
        quot = self.level.quotient
        bad = None
        for idx, row in enumerate(self.ee.relations):
            acc = d.zero()
            for k, coeff in enumerate(row):
                if coeff:
                    acc = acc + coeff * out[k]
            if not quot.projection(acc).is_zero():
                bad = f"relation {idx}"
                break
        report.add("box.p_descends", bad is None, bad)
        return out

    # -- bracket ------------------------------------------------------------

    def _bracket_matrix(self) -> List[List[Vector]]:
        xs = [self.lp.e.word_gen(g) for g in range(len(self.index_names))]
        cbar = [self.cm(x) for x in xs]
        rows = []
        for i in range(self.nsym):
            g, h = divmod(i, self.q)
            row = []
            for j in range(self.nsym):
                g2, h2 = divmod(j, self.q)
                row.append(self.t2_elem(cbar[g2], cbar[g], self.n.cross(self.ys[h], self.ys[h2])))
            rows.append(row)
        return rows

    def _symbol_coords(self, x: Nil2Element) -> Tuple[int, ...]:
        return self.level.datum.word_coords(x)[:self.nsym]

    def _bracket_coords(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        b = self.bracket_matrix
        return self.ee.combine([
            (u[i] * v[j], b[i][j]) for i in range(self.nsym) if u[i] for j in range(self.nsym) if v[j]
        ])

    def bracket(self, x: Nil2Element, y: Nil2Element) -> Vector:
        """``{x (x) z, x' (x) z'} = x'-bar (x) x-bar (x) (z|z')_H``, zero on central symbols."""
        quot = self.level.quotient
        return self._bracket_coords(self._symbol_coords(quot.lift(x)), self._symbol_coords(quot.lift(y)))

    def _bracket_descent(self) -> CheckReport:
        report = CheckReport(title="bracket descent")
        bad = None
        units = [tuple(1 if t == s else 0 for t in range(self.nsym)) for s in range(self.nsym)]
        for idx, r in enumerate(self.relators):
            rc = self._symbol_coords(r)
            if not any(rc):
                continue
            if any(any(self._bracket_coords(rc, e)) or any(self._bracket_coords(e, rc)) for e in units):
                bad = f"relator {idx}"
                break
        report.add("box.bracket_descends", bad is None, bad)
        return report

    # -- square group -------------------------------------------------------

    def _square(self, m: SquareGroup) -> SquareGroup:
        n, ee, lp = self.n, self.ee, self.lp
        d = self.level.datum
        cm = self.cm

        def z_value(u: int, c: int) -> Vector:
            cv = n.ee.gen(c)
            terms = []
            for (i, j), coeff in self.aa.decompose(self.aa.group.gen(u)).items():
                xi, xj = self.a_to_cm(self.a_group.gen(i)), self.a_to_cm(self.a_group.gen(j))
                terms.append((coeff, ee.add(self.t2_elem(xi, xj, cv), self.t2_elem(xj, xi, n.T(cv)))))
            return ee.combine(terms)

        hz = self.zt.lift(ee, z_value)
        values = []
        for s in range(self.nsym):
            g, h = divmod(s, self.q)
            x, y = lp.e.word_gen(g), self.ys[h]
            values.append(ee.add(self.t1_elem(m.H(x), self.cn(y)), self.t2_elem(cm(x), cm(x), n.H(y))))
        for c in d.central.gens():
            values.append(hz(self.level.z_lift(self.level.presentation.central_part(c))))
        zero = ee.zero()
        cross = [[zero] * d.nwords for _ in range(d.nwords)]
        for i in range(self.nsym):
            for j in range(self.nsym):
                cross[i][j] = self.bracket_matrix[i][j]
        h_pres = QuadraticMap(d, ee, values, cross)
        report = CheckReport(title=f"H of {self.label}")
        report.merge(h_pres.descent_report(), prefix="presentation.")
        report.merge(relator_descent_report(h_pres, self.relators), prefix="relators.")
        report.raise_for_failure()
        h = h_pres.pushforward(self.level.quotient)
        return SquareGroup(self.datum, ee, self.p, h, kind="box", label=self.label, params={"factors": (m, n)})

    def __repr__(self) -> str:
        return f"BoxProduct({self.label})"


@shared_cache
def box_product(m: Union[SquareGroup, PreSquareGroup], n: SquareGroup) -> BoxProduct:
    """``M [] N`` with its generator data; cached per pair of input objects."""
    return BoxProduct(m, n)


def box(m: Union[SquareGroup, PreSquareGroup], n: SquareGroup) -> Union[SquareGroup, PreSquareGroup]:
    """The composition product, a square group or pre-square group like ``m``.

    For a square group ``m`` the result also satisfies
    ``psg(M [] N) = psg(M) [] N`` on its own levels.

    Raises:
        ValidationError: If a structure map fails to descend to the quotient
    """
    return box_product(m, n).result


def psg_compat_report(m: SquareGroup, n: SquareGroup) -> CheckReport:
    """``psg(M [] N)`` equals ``psg(M) [] N`` and has the same invariants."""
    report = CheckReport(title=f"psg({m.label} [] {n.label})")
    bp = box_product(m, n)
    report.merge(psg_equal_report(psg_forget(bp.result), bp.psg))
    other = BoxProduct(psg_forget(m), n)
    report.add(
        "psg_compat.e", other.datum.abelianization.group.isomorphic(bp.datum.abelianization.group)
        and other.datum.n == bp.datum.n,
    )
    report.add("psg_compat.ee", other.ee.isomorphic(bp.ee), None if other.ee.isomorphic(bp.ee) else f"{other.ee} vs {bp.ee}")
    report.merge(validate_psg(other.result))
    return report


def box_morphism(f: SgMorphism, g: SgMorphism) -> SgMorphism:
    """``f [] g``: ``x (x) z -> f(x) (x) g(z)``."""
    src, tgt = box_product(f.source, g.source), box_product(f.target, g.target)
    zh = src.z_hom(
        tgt,
        FgabHom.from_generator_images(src.a_group, tgt.a_group, [tgt.ab(f(x)) for x in f.source.word_gens()]),
        g.fee,
    )
    e_images = [
        src.evaluate(
            w,
            lambda s, h: tgt.symbol_of(f(f.source.e.word_gen(s)), g(src.ys[h])),
            lambda u: tgt.central(zh(u)),
            tgt.datum,
        )
        for w in src.datum.word_gens()
    ]
    f_bar = FgabHom.from_generator_images(src.cm.group, tgt.cm.group, [tgt.cm(f(x)) for x in f.source.word_gens()])
    g_bar = FgabHom.from_generator_images(src.cn.group, tgt.cn.group, [tgt.cn(g(z)) for z in g.source.word_gens()])
    fee = src.ee_hom(
        tgt.ee,
        lambda i, k: tgt.t1_elem(f.fee(f.source.ee.gen(i)), g_bar(src.cn.group.gen(k))),
        lambda i, j, c: tgt.t2_elem(f_bar(src.cm.group.gen(i)), f_bar(src.cm.group.gen(j)), g.fee(g.source.ee.gen(c))),
    )
    return SgMorphism(src.result, tgt.result, Nil2Hom(src.datum, tgt.datum, e_images), fee)


def box_unit_maps(m: SquareGroup, z: Optional[SquareGroup] = None) -> Tuple[SgMorphism, SgMorphism]:
    """``M -> Z_nil [] M`` (``x -> 1 (x) x``) and ``M -> M [] Z_nil`` (``x -> x (x) 1``)."""
    z = z or znil()
    left = box_product(z, m)
    one_bar = left.cm(z.e.gen(0))
    to_left = SgMorphism.from_images(
        m, left.result,
        [left.symbol(0, h) for h in range(left.q)],
        [left.t2_elem(one_bar, one_bar, a) for a in m.ee.gens()],
    )
    right = box_product(m, z)
    one_cn = right.cn(z.e.gen(0))
    to_right = SgMorphism.from_images(
        m, right.result,
        [right.symbol(g, 0) for g in range(len(right.index_names))],
        [right.t1_elem(a, one_cn) for a in m.ee.gens()],
    )
    return to_left, to_right


# ---------------------------------------------------------------------------
# Comparison with the tensor product


def sigma(m: SquareGroup, n: SquareGroup) -> SgMorphism:
    """``sigma: M [] N -> M (.) N``.

    ``x (x) z -> x (.) z``, ``[x,y] (x) c -> (y|x)_H # c``,
    ``a (x) z-bar -> a (x) Delta(z)`` and ``x (x) y (x) c -> (y|x)_H (x) c``.
    """
    bp, tp = box_product(m, n), tensor(m, n)
    target = tp.result
    alift = bp.ab.lift

    def z_value(u: int, c: int) -> Vector:
        terms = [
            (coeff, tp.pair(m.cross(alift(bp.a_group.gen(j)), alift(bp.a_group.gen(i))), n.ee.gen(c)))
            for (i, j), coeff in bp.aa.decompose(bp.aa.group.gen(u)).items()
        ]
        return target.ee.combine(terms)

    zs = bp.zt.lift(target.ee, z_value)
    e_images = [
        bp.evaluate(
            w,
            lambda g, h: tp.odot(m.e.word_gen(g), bp.ys[h]),
            lambda u: target.P(zs(u)),
            target.e,
        )
        for w in bp.datum.word_gens()
    ]
    fee = bp.ee_hom(
        target.ee,
        lambda i, k: tp.pair(m.ee.gen(i), n.derived.delta(bp.cn.group.gen(k))),
        lambda i, j, c: tp.pair(m.cross(bp.cm_lifts[j], bp.cm_lifts[i]), n.ee.gen(c)),
    )
    return SgMorphism(bp.result, target, Nil2Hom(bp.datum, target.e, e_images), fee)


def box_unit_report(m: SquareGroup) -> CheckReport:
    """``Z_nil`` is a two-sided unit for ``[]`` and ``sigma`` respects the units."""
    report = CheckReport(title=f"[] units on {m.label}")
    z = znil()
    to_left, to_right = box_unit_maps(m, z)
    report.add("box.unit_left", to_left.is_iso(), None if to_left.is_iso() else str(to_left.target.ee))
    report.add("box.unit_right", to_right.is_iso(), None if to_right.is_iso() else str(to_right.target.ee))
    ident = SgMorphism.identity(m)
    back = unit_left(tensor(z, m)).compose(sigma(z, m)).compose(to_left)
    problem = back.mismatch(ident)
    report.add("sigma.unit_left", problem is None, problem)
    back = unit_right(tensor(m, z)).compose(sigma(m, z)).compose(to_right)
    problem = back.mismatch(ident)
    report.add("sigma.unit_right", problem is None, problem)
    return report


def sigma_naturality_report(f: SgMorphism, g: SgMorphism) -> CheckReport:
    """``sigma o (f [] g) = (f (.) g) o sigma``."""
    report = CheckReport(title="naturality of sigma")
    lhs = sigma(f.target, g.target).compose(box_morphism(f, g))
    rhs = tensor_morphism(f, g).compose(sigma(f.source, g.source))
    problem = lhs.mismatch(rhs)
    report.add("sigma.natural", problem is None, problem)
    return report


def sigma_report(m: SquareGroup, n: SquareGroup) -> CheckReport:
    """Whether ``sigma`` is an isomorphism, with the two levels reported separately."""
    report = CheckReport(title=f"sigma on {m.label}, {n.label}")
    s = sigma(m, n)
    report.summary["box.ee"] = str(s.source.ee)
    report.summary["tensor.ee"] = str(s.target.ee)
    report.summary["sigma.iso"] = str(s.is_iso())
    return report
