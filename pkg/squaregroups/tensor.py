"""The tensor product of square groups.

``(M (.) N)_e`` is generated by symbols ``x (.) y`` and central bars
``a #  b = P(a (x) b)`` subject to

    1. ``a # b`` is bilinear and central
    2. ``x (.) (y1 + y2) = x (.) y1 + x (.) y2``
    3. ``(x1 + x2) (.) y = x1 (.) y + x2 (.) y + (x2|x1)_H # H(y)``
    4. ``x (.) P(b) = (x|x)_H # b``
    5. ``P(a) (.) y = a # Delta(y)``
    6. ``T(a) # T(b) = -(a # b)``

and ``(M (.) N)_ee = M_ee (x) N_ee``. The general algorithm presents the
e-level directly on symbols ``x_g (.) y_h`` over word generators with
commutators ``[x (.) y, x' (.) y'] = (x|x')_H # (y|y')_H``; products with
``Z_nil`` and products of abelian groups take shortcuts.

In generator names ``x@y`` stands for ``x (.) y``.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .checks import CheckReport
from .nil2 import CentralHom, Nil2Datum, Nil2Element, Nil2Presentation, QuadraticMap, Syllables, relator_descent_report
from .sqcore import SgMorphism, SquareGroup, check_inverse_pair, n_star
from .utils import ValidationError, binom2, setup_logger, shared_cache
from .zalgebra import FgAbelianGroup, FgabHom, FgabTensor, Vector, tensor_hom, tensor_swap


logger = setup_logger(__name__)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class SymbolTerm:
    """``k`` times the generator symbol with the given word-generator indices."""

    index: Tuple[int, ...]
    k: int


@dataclass(frozen=True)
class BarTerm:
    """The central element ``P(w)`` for ``w`` in the ee-level group."""

    w: Vector


Term = Union[SymbolTerm, BarTerm]


@dataclass(frozen=True)
class Odot:
    """Formal term ``k (x (.) y)``."""

    x: Nil2Element
    y: Nil2Element
    k: int = 1


@dataclass(frozen=True)
class Bar:
    """Formal term ``k (a # b)``."""

    a: Vector
    b: Vector
    k: int = 1


def t_hom(m: SquareGroup) -> FgabHom:
    """The involution ``T = HP - Id`` as a homomorphism."""
    return FgabHom.from_function(m.ee, m.ee, m.T)


def word_of(d: Nil2Datum, x: Nil2Element) -> Syllables:
    """The ordered word of ``x`` as syllables."""
    return [(g, k) for g, k in enumerate(d.word_coords(x)) if k]


def extend_word(
    sq: SquareGroup,
    word: Syllables,
    on_gen: Callable[[int], Nil2Element],
    cross_bar: Callable[[Vector], Nil2Element],
    target: Nil2Datum,
) -> Nil2Element:
    """Evaluate ``F`` on a word, where ``F(x1 + x2) = F(x1) + F(x2) + cross_bar((x2|x1)_H)``.

    Args:
        sq: Square group whose word generators the syllables refer to
        word: Syllables ``(generator, exponent)``
        on_gen: ``F`` on word generators
        cross_bar: Homomorphism ``sq.ee -> centre of target``
        target: Codomain datum

    Returns:
        ``F(word)``
    """
    e = sq.e
    acc = target.zero()
    prefix = e.zero()
    for g, k in word:
        if not k:
            continue
        gen = e.word_gen(g)
        s = e.scale(k, gen)
        value = k * on_gen(g) + cross_bar(sq.ee.scale(binom2(k), sq.cross(gen, gen)))
        acc = acc + value + cross_bar(sq.cross(s, prefix))
        prefix = prefix + s
    return acc


def symbol_names(*families: Sequence[str]) -> List[str]:
    names = [""]
    for family in families:
        names = [f"{a}@{b}" if a else b for a in names for b in family]
    if len(set(names)) != len(names):
        names = [f"s{i}" for i in range(len(names))]
    return names


# ---------------------------------------------------------------------------
# Presentations on symbols


class SymbolPresentation:
    """Nil2 presentation on symbols with a central quotient of an ee-level group.

    The central group is ``Z = ee / <z_relations>``; every pair of symbols
    gets a prescribed commutator in ``Z``.
    """

    def __init__(
        self,
        names: Sequence[str],
        ee: FgAbelianGroup,
        z_relations: Sequence[Vector],
        commutator: Callable[[int, int], Vector],
    ):
        self.ee = ee
        self.z_group, self.z_proj = ee.quotient(list(z_relations))
        self.k = len(names)
        comm = {
            (a, b): self.z_proj(commutator(a, b))
            for a in range(self.k) for b in range(a + 1, self.k)
        }
        self.presentation = Nil2Presentation(names, self.z_group, comm)
        self.datum = self.presentation.datum
        self.quotient = None

    def gen(self, i: int) -> Nil2Element:
        return self.datum.gen(i)

    def central(self, w: Sequence[int]) -> Nil2Element:
        """The bar ``P(w)`` inside the presentation datum."""
        return self.presentation.central_element(self.z_proj(w))

    def z_lift(self, u: Sequence[int]) -> Vector:
        return self.ee.reduce(self.z_group.to_gens(u))

    def finish(
        self,
        relators: Sequence[Nil2Element],
        sym_value: Callable[[int], Vector],
        sym_cross: Callable[[int, int], Vector],
        bar_value: Callable[[Vector], Vector],
        **square_kwargs,
    ) -> SquareGroup:
        """Quotient by ``relators`` and build the square group.

        ``H`` is given by ``sym_value`` on symbols, ``bar_value`` on bars and
        the cross-effect ``sym_cross`` on symbol pairs.

        Raises:
            ValidationError: If ``H`` does not descend to the quotient
        """
        d = self.datum
        ee = self.ee
        values = [sym_value(i) for i in range(self.k)]
        for c in d.central.gens():
            values.append(bar_value(self.z_lift(self.presentation.central_part(c))))
        zero = ee.zero()
        cross = [[zero] * d.nwords for _ in range(d.nwords)]
        for i in range(self.k):
            for j in range(self.k):
                cross[i][j] = sym_cross(i, j)
        h_pres = QuadraticMap(d, ee, values, cross)
        report = CheckReport(title="symbol presentation")
        report.merge(h_pres.descent_report(), prefix="presentation.")
        report.merge(relator_descent_report(h_pres, relators), prefix="relators.")
        report.raise_for_failure()

        self.quotient = quot = self.presentation.finish([r for r in relators if not r.is_zero()])
        h = h_pres.pushforward(quot)
        p = CentralHom(ee, quot.datum, [quot.projection(self.central(w)) for w in ee.gens()], check=False)
        return SquareGroup(quot.datum, ee, p, h, **square_kwargs)

    def project(self, x: Nil2Element) -> Nil2Element:
        return self.quotient.projection(x)

    def expand(self, x: Nil2Element, unravel: Callable[[int], Tuple[int, ...]]) -> List[Term]:
        """Ordered symbol terms followed by one bar whose sum is ``x``."""
        d = self.datum
        coords = d.word_coords(self.quotient.lift(x))
        terms: List[Term] = [SymbolTerm(unravel(i), k) for i, k in enumerate(coords[:self.k]) if k]
        u = self.presentation.central_part(coords[self.k:])
        if any(u):
            terms.append(BarTerm(self.z_lift(u)))
        return terms


class SymbolicProduct:
    """Square group whose e-level is generated by symbols and bars.

    Subclasses provide ``result``, ``symbol(*index)``, ``expand(x)`` and
    the ee-level group ``ee``.
    """

    result: SquareGroup

    def symbol(self, *index: int) -> Nil2Element:
        raise NotImplementedError

    def expand(self, x: Nil2Element) -> List[Term]:
        raise NotImplementedError

    def evaluate(
        self,
        x: Nil2Element,
        on_symbol: Callable[..., Nil2Element],
        on_bar: Callable[[Vector], Nil2Element],
        target: Nil2Datum,
    ) -> Nil2Element:
        """Image of ``x`` under the homomorphism given on symbols and bars."""
        acc = target.zero()
        for term in self.expand(x):
            if isinstance(term, SymbolTerm):
                acc = acc + term.k * on_symbol(*term.index)
            else:
                acc = acc + on_bar(term.w)
        return acc

    def extend_first(
        self,
        x: Nil2Element,
        on_symbol: Callable[..., Nil2Element],
        on_bar: Callable[[Vector], Nil2Element],
        cross_bar: Callable[[Vector], Nil2Element],
        target: Nil2Datum,
    ) -> Nil2Element:
        """Like ``extend_word`` but over the symbol expansion of ``x``.

        ``F`` is additive on bars and satisfies
        ``F(x1 + x2) = F(x1) + F(x2) + cross_bar((x2|x1)_H)``.
        """
        res = self.result
        acc = target.zero()
        prefix = res.e.zero()
        for term in self.expand(x):
            if isinstance(term, SymbolTerm):
                gen = self.symbol(*term.index)
                s = term.k * gen
                value = term.k * on_symbol(*term.index)
                value = value + cross_bar(res.ee.scale(binom2(term.k), res.cross(gen, gen)))
            else:
                s = res.P(term.w)
                value = on_bar(term.w)
            acc = acc + value + cross_bar(res.cross(s, prefix))
            prefix = prefix + s
        return acc

    def lift_morphism(
        self,
        target: SquareGroup,
        on_symbol: Callable[..., Nil2Element],
        fee: FgabHom,
        check: bool = True,
    ) -> SgMorphism:
        """Morphism out of the product given on symbols and on the ee-level.

        Bars go to ``P(f_ee(w))``.

        Raises:
            ValidationError: If the data do not define a morphism (when ``check``)
        """
        res = self.result
        on_bar = lambda w: target.P(fee(w))
        e_images = [self.evaluate(w, on_symbol, on_bar, target.e) for w in res.word_gens()]
        ee_rows = [fee(a) for a in res.ee.gens()]
        return SgMorphism.from_images(res, target, e_images, ee_rows, check=check)


# ---------------------------------------------------------------------------
# Binary tensor products


class TensorProduct(SymbolicProduct):
    """``M (.) N`` with its generator dictionary.

    Attributes:
        left: ``M``
        right: ``N``
        result: The product square group; ``result.ee`` is ``ee_tensor.group``
        ee_tensor: ``M_ee (x) N_ee``
        tt: ``T (x) T`` on ``ee_tensor``
        strategy: How the product was built
    """

    strategy = "base"

    def __init__(self, m: SquareGroup, n: SquareGroup):
        self.left = m
        self.right = n
        self.ee_tensor = FgabTensor(m.ee, n.ee)
        self.xs = m.word_gens()
        self.ys = n.word_gens()
        self.tt = tensor_hom(t_hom(m), t_hom(n), self.ee_tensor, self.ee_tensor)

    @property
    def label(self) -> str:
        return f"({self.left.label} (.) {self.right.label})"

    def pair(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        """``a (x) b`` in the ee-level."""
        return self.ee_tensor.pair(a, b)

    def bar(self, a: Sequence[int], b: Sequence[int]) -> Nil2Element:
        """``a # b = P(a (x) b)``."""
        return self.result.P(self.pair(a, b))

    def odot(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        raise NotImplementedError

    def tr(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """The left-linear symbol ``x |> y = x (.) y - H(x) # T H(y)``."""
        m, n = self.left, self.right
        return self.odot(x, y) - self.bar(m.H(x), n.T(n.H(y)))

    def symbol(self, g: int, h: int) -> Nil2Element:
        return self.odot(self.xs[g], self.ys[h])

    def reduce(self, terms: Sequence[Union[Odot, Bar]]) -> Nil2Element:
        return tensor_e_reduce(self, terms)

    @property
    def generators(self) -> Dict[str, Nil2Element]:
        """Formal symbols on word generators and bars on canonical ee-generators."""
        out: Dict[str, Nil2Element] = {}
        xn, yn = self.left.e.word_names(), self.right.e.word_names()
        for g in range(len(self.xs)):
            for h in range(len(self.ys)):
                out[f"{xn[g]}@{yn[h]}"] = self.symbol(g, h)
        for i, a in enumerate(self.left.ee.gens()):
            for j, b in enumerate(self.right.ee.gens()):
                out[f"ee{i}#ee{j}"] = self.bar(a, b)
        return out

    def __repr__(self) -> str:
        return f"TensorProduct({self.label}, strategy={self.strategy})"


class PresentedTensor(TensorProduct):
    """General algorithm: direct presentation on symbols over word generators."""

    strategy = "presented"

    def __init__(self, m: SquareGroup, n: SquareGroup):
        super().__init__(m, n)
        xs, ys = self.xs, self.ys
        q = len(ys)
        self.q = q
        ee = self.ee_tensor.group
        tt = self.tt

        def commutator(a: int, b: int) -> Vector:
            (g, h), (g2, h2) = divmod(a, q), divmod(b, q)
            return self.pair(m.cross(xs[g], xs[g2]), n.cross(ys[h], ys[h2]))

        names = symbol_names(m.e.word_names(), n.e.word_names())
        self.level = level = SymbolPresentation(names, ee, [ee.add(w, tt(w)) for w in ee.gens()], commutator)
        d = level.datum

        relators: List[Nil2Element] = []
        for g in range(len(xs)):
            for _, word in n.e.relators:
                relators.append(self._linear_word(g, word))
            for b in n.ee.gens():
                relators.append(self._linear(g, n.P(b)) - level.central(self.pair(m.cross(xs[g], xs[g]), b)))
        for h, y in enumerate(ys):
            hy = n.H(y)
            cross_bar = lambda c, hy=hy: level.central(self.pair(c, hy))
            for _, word in m.e.relators:
                relators.append(extend_word(m, word, lambda g, h=h: self._sym(g, h), cross_bar, d))
            for a in m.ee.gens():
                relators.append(self._odot_presented(m.P(a), y) - level.central(self.pair(a, n.delta(y))))

        def sym_value(i: int) -> Vector:
            g, h = divmod(i, q)
            x, y = xs[g], ys[h]
            return ee.add(self.pair(m.cross(x, x), n.H(y)), self.pair(m.H(x), n.delta(y)))

        def sym_cross(i: int, j: int) -> Vector:
            (g, h), (g2, h2) = divmod(i, q), divmod(j, q)
            return self.pair(m.cross(xs[g], xs[g2]), n.cross(ys[h], ys[h2]))

        self.result = level.finish(
            relators, sym_value, sym_cross, lambda w: ee.sub(w, tt(w)),
            kind="tensor", label=self.label, params={"factors": (m, n)},
        )
        logger.debug(
            f"tensor {self.label}: {len(names)} symbols, {len(relators)} relators, "
            f"e has {self.result.e.n} lattice generators, ee = {ee}"
        )

    def _sym(self, g: int, h: int) -> Nil2Element:
        return self.level.gen(g * self.q + h)

    def _linear_word(self, g: int, word: Syllables) -> Nil2Element:
        acc = self.level.datum.zero()
        for h, k in word:
            if k:
                acc = acc + k * self._sym(g, h)
        return acc

    def _linear(self, g: int, y: Nil2Element) -> Nil2Element:
        return self._linear_word(g, word_of(self.right.e, y))

    def _odot_presented(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        m, n = self.left, self.right
        hy = n.H(y)
        return extend_word(
            m, word_of(m.e, x),
            lambda g: self._linear(g, y),
            lambda c: self.level.central(self.pair(c, hy)),
            self.level.datum,
        )

    def odot(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.level.project(self._odot_presented(x, y))

    def expand(self, x: Nil2Element) -> List[Term]:
        return self.level.expand(x, lambda i: divmod(i, self.q))


def _transported(m: SquareGroup, phi: FgabHom, label: str, params: Dict[str, object]) -> SquareGroup:
    """``m`` with its ee-level moved along the isomorphism ``phi``."""
    inv = phi.inverse()
    target = phi.target
    p = CentralHom(target, m.e, [m.P(inv(w)) for w in target.gens()], check=False)
    return SquareGroup(m.e, target, p, m.h.then(phi), kind="tensor", label=label, params=params)


class UnitLeftTensor(TensorProduct):
    """``Z_nil (.) A``, identified with ``A`` through ``n (.) x -> n x + C(n, 2) P H(x)``."""

    strategy = "unit_left"

    def __init__(self, z: SquareGroup, a: SquareGroup):
        super().__init__(z, a)
        one = z.ee.gen(0)
        phi = FgabHom(a.ee, self.ee_tensor.group, [self.pair(one, b) for b in a.ee.gens()], check=False)
        self.result = _transported(a, phi, self.label, {"factors": (z, a)})

    def odot(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        n = x.v[0]
        a = self.right
        return a.e.scale(n, y) + a.e.scale(binom2(n), a.P(a.H(y)))

    def expand(self, x: Nil2Element) -> List[Term]:
        return [SymbolTerm((0, h), k) for h, k in word_of(self.right.e, x)]


class UnitRightTensor(TensorProduct):
    """``A (.) Z_nil``, identified with ``A`` through ``x (.) n -> n x``."""

    strategy = "unit_right"

    def __init__(self, a: SquareGroup, z: SquareGroup):
        super().__init__(a, z)
        one = z.ee.gen(0)
        phi = FgabHom(a.ee, self.ee_tensor.group, [self.pair(b, one) for b in a.ee.gens()], check=False)
        self.result = _transported(a, phi, self.label, {"factors": (a, z)})

    def odot(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.left.e.scale(y.v[0], x)

    def expand(self, x: Nil2Element) -> List[Term]:
        return [SymbolTerm((g, 0), k) for g, k in word_of(self.left.e, x)]


class AbelianTensor(TensorProduct):
    """Classical ``A (x) B`` for square groups with trivial ee-level."""

    strategy = "abelian"

    def __init__(self, m: SquareGroup, n: SquareGroup):
        super().__init__(m, n)
        self.groups = FgabTensor(m.params["group"], n.params["group"])
        e = Nil2Datum.abelian(self.groups.group)
        ee = self.ee_tensor.group
        self.result = SquareGroup(
            e, ee, CentralHom.zero(ee, e), QuadraticMap.zero(e, ee),
            kind="tensor", label=self.label, params={"factors": (m, n), "group": self.groups.group},
        )

    def odot(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.result.e.element(list(self.groups.pair(x.v, y.v)))

    def expand(self, x: Nil2Element) -> List[Term]:
        return [SymbolTerm(index, k) for index, k in sorted(self.groups.decompose(x.v).items())]


STRATEGIES = ("auto", "presented")


@shared_cache
def tensor(m: SquareGroup, n: SquareGroup, strategy: str = "auto") -> TensorProduct:
    """The tensor product ``M (.) N``.

    With ``strategy="auto"`` a ``Z_nil`` factor is absorbed by the unit
    isomorphisms and two abelian groups use the classical tensor product;
    everything else is presented on symbols. Results are cached per pair
    of input objects, so repeated calls return the same product.

    Args:
        m: Left factor
        n: Right factor
        strategy: "auto" or "presented"

    Returns:
        TensorProduct whose relations were re-checked on generators

    Raises:
        ValueError: For an unknown strategy
        ValidationError: If the product fails a defining relation
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown tensor strategy '{strategy}' (expected one of {STRATEGIES})")
    if strategy == "auto" and m.kind == "znil":
        tp: TensorProduct = UnitLeftTensor(m, n)
    elif strategy == "auto" and n.kind == "znil":
        tp = UnitRightTensor(m, n)
    elif strategy == "auto" and m.kind == "abelian" and n.kind == "abelian":
        tp = AbelianTensor(m, n)
    else:
        tp = PresentedTensor(m, n)
    tensor_relations_report(tp).raise_for_failure()
    logger.debug(f"built {tp!r}: Coker(P) = {tp.result.coker.group}")
    return tp


def tensor_e_reduce(tp: TensorProduct, terms: Sequence[Union[Odot, Bar]]) -> Nil2Element:
    """Normal form of a formal sum of symbols and bars, added in order.

    Raises:
        ValueError: If a symbol is not over the two factors of ``tp``
    """
    m, n = tp.left, tp.right
    acc = tp.result.e.zero()
    for term in terms:
        if isinstance(term, Odot):
            if term.x.owner is not m.e or term.y.owner is not n.e:
                raise ValueError(f"symbol is not over {m.label} and {n.label}")
            acc = acc + term.k * tp.odot(term.x, term.y)
        elif isinstance(term, Bar):
            if len(term.a) != m.ee.rank or len(term.b) != n.ee.rank:
                raise ValueError(f"bar is not over the ee-levels of {m.label} and {n.label}")
            acc = acc + term.k * tp.bar(m.ee.reduce(term.a), n.ee.reduce(term.b))
        else:
            raise ValueError(f"unknown formal term {term!r}")
    return acc


# ---------------------------------------------------------------------------
# Relation checks


def _first(pairs, predicate) -> Optional[str]:
    for label, args in pairs:
        if not predicate(*args):
            return label
    return None


def tensor_relations_report(tp: TensorProduct) -> CheckReport:
    """Re-check the defining relations and the structure maps on generators."""
    m, n, res = tp.left, tp.right, tp.result
    report = CheckReport(title=f"relations of {tp.label}")
    xn, yn = m.e.word_names(), n.e.word_names()
    xs, ys = list(enumerate(tp.xs)), list(enumerate(tp.ys))
    a_gens, b_gens = m.ee.gens(), n.ee.gens()

    bad = None
    for a in a_gens:
        for b in b_gens:
            if not res.e.is_central(tp.bar(a, b)):
                bad = f"{a} # {b}"
                break
            if tp.bar(m.T(a), n.T(b)) != -tp.bar(a, b):
                bad = f"T{a} # T{b}"
                break
        if bad:
            break
    report.add("tensor.bar", bad is None, bad)

    witness = _first(
        [(f"{xn[g]}@({yn[h]}+{yn[h2]})", (x, y, y2)) for g, x in xs for h, y in ys for h2, y2 in ys],
        lambda x, y, y2: tp.odot(x, y + y2) == tp.odot(x, y) + tp.odot(x, y2),
    )
    report.add("tensor.linear_right", witness is None, witness)
    witness = _first(
        [(f"({xn[g]}+{xn[g2]})@{yn[h]}", (x, x2, y)) for g, x in xs for g2, x2 in xs for h, y in ys],
        lambda x, x2, y: tp.odot(x + x2, y) == tp.odot(x, y) + tp.odot(x2, y) + tp.bar(m.cross(x2, x), n.H(y)),
    )
    report.add("tensor.quadratic_left", witness is None, witness)
    witness = _first(
        [(f"{xn[g]}@P(ee{i})", (x, b)) for g, x in xs for i, b in enumerate(b_gens)],
        lambda x, b: tp.odot(x, n.P(b)) == tp.bar(m.cross(x, x), b),
    )
    report.add("tensor.right_p", witness is None, witness)
    witness = _first(
        [(f"P(ee{i})@{yn[h]}", (a, y)) for i, a in enumerate(a_gens) for h, y in ys],
        lambda a, y: tp.odot(m.P(a), y) == tp.bar(a, n.delta(y)),
    )
    report.add("tensor.left_p", witness is None, witness)

    ee = res.ee
    witness = _first(
        [(f"H({xn[g]}@{yn[h]})", (x, y)) for g, x in xs for h, y in ys],
        lambda x, y: res.H(tp.odot(x, y)) == ee.add(tp.pair(m.cross(x, x), n.H(y)), tp.pair(m.H(x), n.delta(y))),
    )
    report.add("tensor.h_symbol", witness is None, witness)
    witness = _first(
        [(f"H(ee{i}#ee{j})", (a, b)) for i, a in enumerate(a_gens) for j, b in enumerate(b_gens)],
        lambda a, b: res.H(tp.bar(a, b)) == ee.sub(tp.pair(a, b), tp.pair(m.T(a), n.T(b))),
    )
    report.add("tensor.h_bar", witness is None, witness)
    witness = _first(
        [(f"({xn[g]}@{yn[h]}|{xn[g2]}@{yn[h2]})", (x, y, x2, y2))
         for g, x in xs for h, y in ys for g2, x2 in xs for h2, y2 in ys],
        lambda x, y, x2, y2: res.cross(tp.odot(x, y), tp.odot(x2, y2)) == tp.pair(m.cross(x, x2), n.cross(y, y2)),
    )
    report.add("tensor.cross", witness is None, witness)

    coker = FgabTensor(m.coker.group, n.coker.group).group
    report.add(
        "tensor.coker", res.coker.group.isomorphic(coker),
        f"Coker(P) = {res.coker.group}, expected {coker}",
    )
    report.summary["e.abelianization"] = str(res.e.abelianization.group)
    report.summary["ee"] = str(res.ee)
    return report


def derived_identities_report(tp: TensorProduct, ns: Sequence[int] = (-2, -1, 0, 1, 2, 3, 4)) -> CheckReport:
    """Check identities that follow from the defining relations.

    ``(nx) (.) y = n(x (.) y) + C(n,2) (x|x)_H # H(y)``,
    ``HPH(x) # b = H(x) # (b - Tb)``, ``T = -(T (x) T)``,
    ``Delta(x (.) y) = Delta(x) (x) Delta(y)``, ``Delta(a # b) = 0`` and
    ``n*(x) (.) y = n*(x (.) y)``.
    """
    m, n, res = tp.left, tp.right, tp.result
    report = CheckReport(title=f"derived identities of {tp.label}")
    xs, ys = tp.xs, tp.ys
    xn, yn = m.e.word_names(), n.e.word_names()
    grid = [(f"{xn[g]}@{yn[h]}", (x, y)) for g, x in enumerate(xs) for h, y in enumerate(ys)]

    witness = _first(
        [(f"{k}*{label}", (k, x, y)) for label, (x, y) in grid for k in ns],
        lambda k, x, y: tp.odot(m.e.scale(k, x), y)
        == k * tp.odot(x, y) + binom2(k) * tp.bar(m.cross(x, x), n.H(y)),
    )
    report.add("tensor.scalar_left", witness is None, witness)

    witness = _first(
        [(f"HPH({xn[g]})#ee{j}", (x, b)) for g, x in enumerate(xs) for j, b in enumerate(n.ee.gens())],
        lambda x, b: tp.bar(m.H(m.P(m.H(x))), b) == tp.bar(m.H(x), n.ee.sub(b, n.T(b))),
    )
    report.add("tensor.hph", witness is None, witness)

    ee = res.ee
    bad = next((i for i, w in enumerate(ee.gens()) if res.T(w) != ee.neg(tp.tt(w))), None)
    report.add("tensor.t", bad is None, None if bad is None else f"ee{bad}")

    witness = _first(grid, lambda x, y: res.delta(tp.odot(x, y)) == tp.pair(m.delta(x), n.delta(y)))
    report.add("tensor.delta", witness is None, witness)
    bad = next((i for i, w in enumerate(ee.gens()) if any(res.delta(res.P(w)))), None)
    report.add("tensor.delta_bar", bad is None, None if bad is None else f"ee{bad}")

    stars = {k: (n_star(m, k), n_star(res, k)) for k in ns}
    witness = _first(
        [(f"{k}*:{label}", (k, x, y)) for label, (x, y) in grid for k in ns],
        lambda k, x, y: tp.odot(stars[k][0](x), y) == stars[k][1](tp.odot(x, y)),
    )
    report.add("tensor.n_star", witness is None, witness)
    return report


def left_linear_report(tp: TensorProduct) -> CheckReport:
    """Relations of the left-linear symbols ``x |> y``."""
    m, n, res = tp.left, tp.right, tp.result
    report = CheckReport(title=f"left-linear relations of {tp.label}")
    xs, ys = tp.xs, tp.ys
    xn, yn = m.e.word_names(), n.e.word_names()

    witness = _first(
        [(f"{xn[g]}|>({yn[h]}+{yn[h2]})", (x, y, y2))
         for g, x in enumerate(xs) for h, y in enumerate(ys) for h2, y2 in enumerate(ys)],
        lambda x, y, y2: tp.tr(x, y + y2) == tp.tr(x, y) + tp.tr(x, y2) + tp.bar(m.H(x), n.cross(y2, y)),
    )
    report.add("tr.quadratic_right", witness is None, witness)
    witness = _first(
        [(f"({xn[g]}+{xn[g2]})|>{yn[h]}", (x, x2, y))
         for g, x in enumerate(xs) for g2, x2 in enumerate(xs) for h, y in enumerate(ys)],
        lambda x, x2, y: tp.tr(x + x2, y) == tp.tr(x, y) + tp.tr(x2, y),
    )
    report.add("tr.linear_left", witness is None, witness)
    witness = _first(
        [(f"{xn[g]}|>P(ee{j})", (x, b)) for g, x in enumerate(xs) for j, b in enumerate(n.ee.gens())],
        lambda x, b: tp.tr(x, n.P(b)) == tp.bar(m.delta(x), b),
    )
    report.add("tr.right_p", witness is None, witness)
    witness = _first(
        [(f"P(ee{i})|>{yn[h]}", (a, y)) for i, a in enumerate(m.ee.gens()) for h, y in enumerate(ys)],
        lambda a, y: tp.tr(m.P(a), y) == tp.bar(a, n.cross(y, y)),
    )
    report.add("tr.left_p", witness is None, witness)
    witness = _first(
        [(f"H({xn[g]}|>{yn[h]})", (x, y)) for g, x in enumerate(xs) for h, y in enumerate(ys)],
        lambda x, y: res.H(tp.tr(x, y)) == res.ee.add(tp.pair(m.delta(x), n.H(y)), tp.pair(m.H(x), n.cross(y, y))),
    )
    report.add("tr.h_symbol", witness is None, witness)
    return report


def symmetric_report(tp: TensorProduct) -> CheckReport:
    """Relations of the symmetric presentation with both kinds of symbols."""
    m, n = tp.left, tp.right
    report = CheckReport(title=f"symmetric relations of {tp.label}")
    base = tensor_relations_report(tp)
    tr = left_linear_report(tp)
    for name in ("tensor.bar", "tensor.linear_right", "tensor.left_p", "tensor.h_symbol", "tensor.h_bar"):
        report.merge(CheckReport(results=[r for r in base.results if r.name == name]))
    for name in ("tr.linear_left", "tr.right_p", "tr.h_symbol"):
        report.merge(CheckReport(results=[r for r in tr.results if r.name == name]))
    witness = _first(
        [(f"{g}:{h}", (x, y)) for g, x in enumerate(tp.xs) for h, y in enumerate(tp.ys)],
        lambda x, y: tp.odot(x, y) - tp.tr(x, y) == tp.bar(m.H(x), n.T(n.H(y))),
    )
    report.add("sym.difference", witness is None, witness)
    return report


def tr_product(m: SquareGroup, n: SquareGroup) -> TensorProduct:
    """The left-linear presentation, read off ``tensor(m, n)`` through ``x |> y``.

    Raises:
        ValidationError: If a left-linear relation fails
    """
    tp = tensor(m, n)
    left_linear_report(tp).raise_for_failure()
    return tp


def odot_product(m: SquareGroup, n: SquareGroup) -> TensorProduct:
    """The symmetric presentation, read off ``tensor(m, n)``.

    Raises:
        ValidationError: If a relation of the symmetric presentation fails
    """
    tp = tensor(m, n)
    symmetric_report(tp).raise_for_failure()
    return tp


# ---------------------------------------------------------------------------
# Functoriality and structure isomorphisms


def tensor_morphism(
    f: SgMorphism,
    g: SgMorphism,
    source: Optional[TensorProduct] = None,
    target: Optional[TensorProduct] = None,
) -> SgMorphism:
    """``f (.) g: x (.) y -> f(x) (.) g(y)``, ``a (x) b -> f(a) (x) g(b)``."""
    source = source or tensor(f.source, g.source)
    target = target or tensor(f.target, g.target)
    if source.left is not f.source or source.right is not g.source:
        raise ValueError("source tensor product does not match the morphisms")
    if target.left is not f.target or target.right is not g.target:
        raise ValueError("target tensor product does not match the morphisms")
    fee = tensor_hom(f.fee, g.fee, source.ee_tensor, target.ee_tensor)
    return source.lift_morphism(
        target.result,
        lambda a, b: target.odot(f(source.xs[a]), g(source.ys[b])),
        fee,
    )


def _require_znil(m: SquareGroup, side: str) -> None:
    if m.kind != "znil":
        raise ValidationError(f"the {side} factor must be Z_nil, got {m.label}", check="tensor.unit")


def unit_left(tp: TensorProduct) -> SgMorphism:
    """``iota: Z_nil (.) A -> A``, ``n (.) x -> n x + C(n, 2) P H(x)``."""
    _require_znil(tp.left, "left")
    a = tp.right
    fee = tp.ee_tensor.lift(a.ee, lambda i, j: a.ee.gen(j))
    return tp.lift_morphism(a, lambda g, h: tp.ys[h], fee)


def unit_left_inverse(tp: TensorProduct) -> SgMorphism:
    """``x -> 1 (.) x``."""
    _require_znil(tp.left, "left")
    a, one = tp.right, tp.xs[0]
    return SgMorphism.from_images(
        a, tp.result,
        [tp.odot(one, y) for y in a.word_gens()],
        [tp.pair(tp.left.ee.gen(0), b) for b in a.ee.gens()],
    )


def unit_right(tp: TensorProduct) -> SgMorphism:
    """``kappa: A (.) Z_nil -> A``, ``x (.) n -> n x``."""
    _require_znil(tp.right, "right")
    a = tp.left
    fee = tp.ee_tensor.lift(a.ee, lambda i, j: a.ee.gen(i))
    return tp.lift_morphism(a, lambda g, h: tp.xs[g], fee)


def unit_right_inverse(tp: TensorProduct) -> SgMorphism:
    """``x -> x (.) 1``."""
    _require_znil(tp.right, "right")
    a, one = tp.left, tp.ys[0]
    return SgMorphism.from_images(
        a, tp.result,
        [tp.odot(x, one) for x in a.word_gens()],
        [tp.pair(b, tp.right.ee.gen(0)) for b in a.ee.gens()],
    )


def symmetry(tp: TensorProduct, reverse: Optional[TensorProduct] = None) -> SgMorphism:
    """``tau: M (.) N -> N (.) M``, ``x (.) y -> y (.) x - H(y) # T H(x)``, ``a (x) b -> b (x) a``."""
    m, n = tp.left, tp.right
    reverse = reverse or tensor(n, m)
    fee = tensor_swap(tp.ee_tensor, reverse.ee_tensor)

    def on_symbol(g: int, h: int) -> Nil2Element:
        x, y = tp.xs[g], tp.ys[h]
        return reverse.odot(y, x) - reverse.bar(n.H(y), m.T(m.H(x)))

    return tp.lift_morphism(reverse.result, on_symbol, fee)


def structure_report(tp: TensorProduct) -> CheckReport:
    """Unit and symmetry isomorphisms available for ``tp``, with their inverses."""
    report = CheckReport(title=f"structure isomorphisms of {tp.label}")
    if tp.left.kind == "znil":
        report.merge(check_inverse_pair(unit_left(tp), unit_left_inverse(tp)), prefix="iota.")
    if tp.right.kind == "znil":
        report.merge(check_inverse_pair(unit_right(tp), unit_right_inverse(tp)), prefix="kappa.")
    reverse = tensor(tp.right, tp.left)
    tau = symmetry(tp, reverse)
    back = symmetry(reverse, tp)
    report.merge(check_inverse_pair(tau, back), prefix="tau.")
    return report


def naturality_report(f: SgMorphism, g: SgMorphism) -> CheckReport:
    """``tau o (f (.) g) = (g (.) f) o tau`` on generators."""
    src, tgt = tensor(f.source, g.source), tensor(f.target, g.target)
    left = symmetry(tgt).compose(tensor_morphism(f, g, src, tgt))
    right = tensor_morphism(g, f, tensor(g.source, f.source), tensor(g.target, f.target)).compose(symmetry(src))
    report = CheckReport(title="naturality of tau")
    problem = left.mismatch(right)
    report.add("tau.natural", problem is None, problem)
    return report
