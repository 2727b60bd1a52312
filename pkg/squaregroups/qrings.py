"""Quadratic rings, quadratic modules and square rings.

A quadratic ring is a square group ``R`` with a monoid structure on ``R_e``
and a ring structure on ``R_ee``; a square ring carries a monoid on ``Q_e``
and a ``Coker(P) (x) Coker(P) (x) Coker(P)^op``-module structure on
``Q_ee``. Products are stored as structure constants on generators:

* ``e_table[g][h]`` is the product of word generators ``g`` and ``h``,
* ``ee_table[i][j]`` the product of canonical ee-generators.

The product extends to all elements through left distributivity and the
right distributivity law with its ``P``-correction term.
"""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .checks import CheckReport
from .constructors import from_abelian, znil, znil_set
from .nil2 import Nil2Datum, Nil2Element, Syllables
from .sqcore import SgMorphism, SquareGroup
from .tensor import word_of
from .utils import UnsupportedInstanceError, ValidationError, binom2, setup_logger
from .zalgebra import FgabHom, Vector


logger = setup_logger(__name__)


Correction = Callable[[Nil2Element, Nil2Element], Nil2Element]


def extend_left(
    d: Nil2Datum,
    word: Syllables,
    on_gen: Callable[[int], Nil2Element],
    correction: Correction,
    target: Nil2Datum,
) -> Nil2Element:
    """Evaluate ``x -> x z`` on a word for ``x``.

    ``on_gen(g)`` is ``w_g z`` and ``correction(u, v)`` is the central term of
    ``(u + v) z - u z - v z``, bilinear in ``u`` and ``v``.
    """
    acc = target.zero()
    prefix = d.zero()
    for g, k in word:
        if not k:
            continue
        w = d.word_gen(g)
        step = k * w
        acc = acc + k * on_gen(g) + binom2(k) * correction(w, w) + correction(prefix, step)
        prefix = prefix + step
    return acc


def _first_failure(cases, predicate) -> Optional[str]:
    return next((label for label, *args in cases if not predicate(*args)), None)


# ---------------------------------------------------------------------------
# Finite monoids


@dataclass
class FiniteMonoid:
    """Finite monoid given by its multiplication table.

    Attributes:
        names: Element names; ``names[unit]`` is the unit
        table: ``table[a][b]`` is the index of ``a * b``
        unit: Index of the unit
    """

    names: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]
    unit: int = 0

    def __post_init__(self):
        self.names = tuple(self.names)
        self.table = tuple(tuple(row) for row in self.table)
        self.validate()

    def validate(self) -> None:
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError(f"monoid element names must be distinct: {self.names}")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError(f"multiplication table must be {n}x{n}")
        if any(not 0 <= c < n for row in self.table for c in row):
            raise ValueError("multiplication table refers to an unknown element")
        u = self.unit
        if any(self.table[u][a] != a or self.table[a][u] != a for a in range(n)):
            raise ValidationError(f"{self.names[u]} is not a two-sided unit", check="monoid.unit", witness=self.names[u])
        for a, b, c in cartesian(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise ValidationError(
                    "multiplication is not associative",
                    check="monoid.associative",
                    witness=(self.names[a], self.names[b], self.names[c]),
                )

    @classmethod
    def from_rules(cls, names: Sequence[str], rules: Dict[Tuple[str, str], str]) -> "FiniteMonoid":
        """Build from products of non-unit elements; ``names[0]`` is the unit.

        Raises:
            ValueError: If a product is missing or names an unknown element
        """
        names = tuple(names)
        index = {s: i for i, s in enumerate(names)}
        table = []
        for a in names:
            row = []
            for b in names:
                if a == names[0]:
                    row.append(index[b])
                elif b == names[0]:
                    row.append(index[a])
                elif (a, b) not in rules:
                    raise ValueError(f"product {a}*{b} is not given")
                elif rules[(a, b)] not in index:
                    raise ValueError(f"product {a}*{b} = {rules[(a, b)]} is not an element")
                else:
                    row.append(index[rules[(a, b)]])
            table.append(row)
        return cls(names, table, 0)

    @classmethod
    def trivial(cls) -> "FiniteMonoid":
        return cls(("1",), ((0,),), 0)

    @classmethod
    def cyclic_group(cls, n: int) -> "FiniteMonoid":
        names = ["1"] + [f"t{i}" for i in range(1, n)]
        return cls(tuple(names), tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), 0)

    def __len__(self) -> int:
        return len(self.names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def is_commutative(self) -> bool:
        n = len(self.names)
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))


# ---------------------------------------------------------------------------
# Quadratic rings


class QuadraticRing:
    """A monoid in ``(SG, (.))``.

    Attributes:
        square: The underlying square group ``R``
        e_table: Products of word generators of ``R_e``
        ee_table: Products of canonical generators of ``R_ee``
        one: The multiplicative unit of ``R_e``
        label: Display name
    """

    def __init__(
        self,
        square: SquareGroup,
        e_table: Sequence[Sequence[Nil2Element]],
        ee_table: Sequence[Sequence[Sequence[int]]],
        one: Nil2Element,
        label: Optional[str] = None,
        check: bool = True,
    ):
        nw, r = square.e.nwords, square.ee.rank
        if len(e_table) != nw or any(len(row) != nw for row in e_table):
            raise ValueError(f"e-level product table must be {nw}x{nw}")
        if len(ee_table) != r or any(len(row) != r for row in ee_table):
            raise ValueError(f"ee-level product table must be {r}x{r}")
        self.square = square
        self.e_table = [list(row) for row in e_table]
        self.ee_table = [[square.ee.reduce(v) for v in row] for row in ee_table]
        self.one = one
        self.label = label or square.label
        if check:
            validate_qring(self).raise_for_failure()

    def __repr__(self) -> str:
        return f"QuadraticRing({self.label})"

    def mul_ee(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        ee = self.square.ee
        return ee.combine([
            (x * y, self.ee_table[i][j]) for i, x in enumerate(a) if x for j, y in enumerate(b) if y
        ])

    def _times_gen(self, word: Syllables, j: int) -> Nil2Element:
        m = self.square
        hz = m.H(m.e.word_gen(j))
        return extend_left(
            m.e, word,
            lambda g: self.e_table[g][j],
            lambda u, v: m.P(self.mul_ee(m.cross(v, u), hz)),
            m.e,
        )

    def mul_words(self, xword: Syllables, yword: Syllables) -> Nil2Element:
        """The product of two words; ``y -> x y`` is a homomorphism."""
        acc = self.square.e.zero()
        for j, k in yword:
            if k:
                acc = acc + k * self._times_gen(xword, j)
        return acc

    def mul_word(self, word: Syllables, y: Nil2Element) -> Nil2Element:
        return self.mul_words(word, word_of(self.square.e, y))

    def mul(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.mul_word(word_of(self.square.e, x), y)

    @property
    def ee_one(self) -> Vector:
        """``(1|1)_H``, the unit of ``R_ee``."""
        return self.square.ee.reduce(self.square.cross(self.one, self.one))


def _ring_law_cases(r: QuadraticRing):
    m = r.square
    gens = m.word_gens()
    names = m.e.word_names()
    return m, gens, names, m.ee.gens()


def validate_qring(r: QuadraticRing) -> CheckReport:
    """Check the quadratic ring axioms on generators, generator pairs and triples."""
    m, gens, names, ee_gens = _ring_law_cases(r)
    e, ee = m.e, m.ee
    report = CheckReport(title=f"quadratic ring {r.label}")
    mul, mee = r.mul, r.mul_ee
    pairs = [(f"({names[g]}, {names[h]})", x, y) for g, x in enumerate(gens) for h, y in enumerate(gens)]
    triples = [
        (f"({names[g]}, {names[h]}, {names[k]})", x, y, z)
        for g, x in enumerate(gens) for h, y in enumerate(gens) for k, z in enumerate(gens)
    ]
    ee_pairs = [(f"(ee{i}, ee{j})", a, b) for i, a in enumerate(ee_gens) for j, b in enumerate(ee_gens)]
    mixed = [(f"(ee{i}, {names[g]})", a, x) for i, a in enumerate(ee_gens) for g, x in enumerate(gens)]

    bad = None
    for g, x in enumerate(gens):
        for _, word in e.relators:
            if not r.mul_word(word, x).is_zero() or not r.mul_words(word_of(e, x), word).is_zero():
                bad = f"relator against {names[g]}"
                break
        if bad:
            break
    report.add("qring.well_defined", bad is None, bad)
    report.add("qring.unit", _first_failure(
        [(names[g], x) for g, x in enumerate(gens)], lambda x: mul(r.one, x) == x and mul(x, r.one) == x) is None)
    bad = _first_failure(triples, lambda x, y, z: mul(mul(x, y), z) == mul(x, mul(y, z)))
    report.add("qring.associative", bad is None, bad)
    bad = _first_failure(triples, lambda x, y, z: mul(x, y + z) == mul(x, y) + mul(x, z))
    report.add("qring.left_distributive", bad is None, bad)
    bad = _first_failure(triples, lambda x, y, z: mul(x + y, z) == mul(x, z) + mul(y, z) + m.P(mee(m.cross(y, x), m.H(z))))
    report.add("qring.right_distributive", bad is None, bad)

    ee_triples = [(f"(ee{i}, ee{j}, ee{k})", a, b, c)
                  for i, a in enumerate(ee_gens) for j, b in enumerate(ee_gens) for k, c in enumerate(ee_gens)]
    bad = _first_failure(ee_triples, lambda a, b, c: mee(mee(a, b), c) == mee(a, mee(b, c)))
    report.add("qring.ee_associative", bad is None, bad)
    one = r.ee_one
    bad = _first_failure([(f"ee{i}", a) for i, a in enumerate(ee_gens)], lambda a: mee(one, a) == a and mee(a, one) == a)
    report.add("qring.ee_unit", bad is None, bad)

    bad = None
    for _, x, y in pairs:
        for label, u, v in pairs:
            if mee(m.cross(x, y), m.cross(u, v)) != ee.reduce(m.cross(mul(x, u), mul(y, v))):
                bad = label
                break
        if bad:
            break
    report.add("qring.cross_multiplicative", bad is None, bad)
    bad = _first_failure(ee_pairs, lambda a, b: not any(ee.add(m.T(mee(a, b)), mee(m.T(a), m.T(b)))))
    report.add("qring.t_multiplicative", bad is None, bad)
    bad = _first_failure(ee_triples, lambda a, b, c: m.T(mee(mee(a, b), c)) == mee(mee(m.T(a), m.T(b)), m.T(c)))
    report.add("qring.t_triple", bad is None, bad)
    bad = _first_failure(mixed, lambda a, x: m.P(mee(a, m.delta(x))) == mul(m.P(a), x))
    report.add("qring.p_delta", bad is None, bad)
    bad = _first_failure(mixed, lambda a, x: m.P(mee(m.cross(x, x), a)) == mul(x, m.P(a)))
    report.add("qring.p_cross", bad is None, bad)
    bad = _first_failure(pairs, lambda x, y: ee.reduce(m.H(mul(x, y))) == ee.add(mee(m.cross(x, x), m.H(y)), mee(m.H(x), m.delta(y))))
    report.add("qring.h_product", bad is None, bad)
    bad = _first_failure(pairs, lambda x, y: ee.reduce(m.delta(mul(x, y))) == mee(m.delta(x), m.delta(y)))
    report.add("qring.delta_multiplicative", bad is None, bad)
    return report


def znil_ring() -> QuadraticRing:
    """``Z_nil`` with integer multiplication."""
    m = znil()
    one = m.e.gen(0)
    return QuadraticRing(m, [[one]], [[(1,)]], one, label="Z_nil")


def _central_pairs(e: Nil2Datum, j: int) -> List[Tuple[Tuple[int, int], int]]:
    """Central word generator ``j`` as a combination of basic commutators."""
    pairs = sorted(e.pair_index, key=e.pair_index.get)
    coeffs = e.central.to_gens(e.central.gen(j))
    return [(pairs[t], c) for t, c in enumerate(coeffs) if c]


def monoid_ring(monoid: FiniteMonoid) -> QuadraticRing:
    """``Z_nil[M]``: ``s t`` from ``M`` on generators and
    ``(a (x) b)(a' (x) b') = aa' (x) bb'`` on ``Z[M x M]``."""
    n = len(monoid)
    m = znil_set(monoid.names)
    e = m.e
    lattice = [e.gen(i) for i in range(n)]
    words: List[Tuple[str, object]] = [("lattice", i) for i in range(n)]
    words += [("central", _central_pairs(e, j)) for j in range(e.central.rank)]

    def product_of(u, v) -> Nil2Element:
        kind_u, du = u
        kind_v, dv = v
        if kind_u == "lattice" and kind_v == "lattice":
            return lattice[monoid.mul(du, dv)]
        if kind_u == "lattice":
            return sum((c * e.commutator(lattice[monoid.mul(du, p)], lattice[monoid.mul(du, q)]) for (p, q), c in dv), e.zero())
        if kind_v == "lattice":
            return sum((c * e.commutator(lattice[monoid.mul(p, dv)], lattice[monoid.mul(q, dv)]) for (p, q), c in du), e.zero())
        return e.zero()

    e_table = [[product_of(u, v) for v in words] for u in words]
    ee_table = [
        [m.ee.gen(monoid.mul(a, c) * n + monoid.mul(b, d)) for c in range(n) for d in range(n)]
        for a in range(n) for b in range(n)
    ]
    ring = QuadraticRing(m, e_table, ee_table, lattice[monoid.unit], label=f"Z_nil[{','.join(monoid.names)}]")
    logger.debug(f"monoid ring {ring.label}: {e.nwords} word generators, ee rank {m.ee.rank}")
    return ring


# ---------------------------------------------------------------------------
# Morphisms and linear elements


def ring_morphism_report(f: SgMorphism, r: QuadraticRing, s: QuadraticRing) -> CheckReport:
    """``f(1) = 1`` and ``f`` is multiplicative on both levels."""
    report = CheckReport(title=f"ring morphism {r.label} -> {s.label}")
    m = r.square
    gens, names = m.word_gens(), m.e.word_names()
    report.add("ring_morphism.unit", f(r.one) == s.one)
    bad = _first_failure(
        [(f"({names[g]}, {names[h]})", x, y) for g, x in enumerate(gens) for h, y in enumerate(gens)],
        lambda x, y: f(r.mul(x, y)) == s.mul(f(x), f(y)),
    )
    report.add("ring_morphism.e", bad is None, bad)
    ee_gens = m.ee.gens()
    bad = _first_failure(
        [(f"(ee{i}, ee{j})", a, b) for i, a in enumerate(ee_gens) for j, b in enumerate(ee_gens)],
        lambda a, b: f.fee(r.mul_ee(a, b)) == s.mul_ee(f.fee(a), f.fee(b)),
    )
    report.add("ring_morphism.ee", bad is None, bad)
    return report


def linear_elements(r: QuadraticRing, bound: int = 2) -> List[Nil2Element]:
    """Elements ``x`` with ``H(x) = 0`` whose word coordinates lie in ``[-bound, bound]``."""
    m = r.square
    found = []
    seen = set()
    for coords in cartesian(range(-bound, bound + 1), repeat=m.e.nwords):
        x = m.e.from_word_coords(list(coords))
        if x not in seen and not any(m.ee.reduce(m.H(x))):
            seen.add(x)
            found.append(x)
    return found


def monoid_adjunction_report(monoid: FiniteMonoid, r: QuadraticRing, bound: int = 2) -> CheckReport:
    """Square-group maps ``Z_nil[M] -> R`` from linear elements are ring maps exactly
    when the underlying map ``M -> L(R)`` is a monoid homomorphism."""
    report = CheckReport(title=f"Z_nil[-] -| L on {r.label}")
    source = monoid_ring(monoid)
    linear = linear_elements(r, bound)
    report.add("adjunction.unit_linear", r.one in linear, "unit is not linear")
    n = len(monoid)
    dm = source.square
    bad = None
    homs = 0
    for choice in cartesian(range(len(linear)), repeat=n):
        images = [linear[c] for c in choice]
        is_hom = images[monoid.unit] == r.one and all(
            images[monoid.mul(a, b)] == r.mul(images[a], images[b]) for a in range(n) for b in range(n)
        )
        f = SgMorphism.from_images(
            dm, r.square,
            [images[i] for i in range(n)] + [
                sum((c * r.square.e.commutator(images[p], images[q]) for (p, q), c in _central_pairs(dm.e, j)), r.square.e.zero())
                for j in range(dm.e.central.rank)
            ],
            [r.square.cross(images[b], images[a]) for a in range(n) for b in range(n)],
        )
        is_ring = ring_morphism_report(f, source, r).ok
        homs += is_hom
        if is_hom != is_ring and bad is None:
            bad = f"{[r.square.e.format(x) for x in images]}: monoid hom {is_hom}, ring map {is_ring}"
    report.add("adjunction.bijection", bad is None, bad)
    report.summary["adjunction.monoid_homs"] = str(homs)
    return report


# ---------------------------------------------------------------------------
# Commutativity and psi


def commutativity_report(r: QuadraticRing) -> CheckReport:
    """``ba = ab`` on ``R_ee`` and ``yx = xy - P(H(x) T H(y))`` on ``R_e``."""
    m, gens, names, ee_gens = _ring_law_cases(r)
    report = CheckReport(title=f"commutativity of {r.label}")
    bad = _first_failure(
        [(f"(ee{i}, ee{j})", a, b) for i, a in enumerate(ee_gens) for j, b in enumerate(ee_gens)],
        lambda a, b: r.mul_ee(a, b) == r.mul_ee(b, a),
    )
    report.add("qring.ee_commutative", bad is None, bad)
    bad = _first_failure(
        [(f"({names[g]}, {names[h]})", x, y) for g, x in enumerate(gens) for h, y in enumerate(gens)],
        lambda x, y: r.mul(y, x) == r.mul(x, y) - m.P(r.mul_ee(m.H(x), m.T(m.H(y)))),
    )
    report.add("qring.e_commutative", bad is None, bad)
    return report


def is_commutative_qring(r: QuadraticRing) -> bool:
    return commutativity_report(r).ok


class PsiMap:
    """``psi: Coker(P) -> Ker(P: R_ee / (Id - T) -> R_e)``, ``x -> H(x) T H(x)``.

    Values are canonical coordinates in ``ker_pbar`` of the derived data.
    """

    def __init__(self, r: QuadraticRing):
        self.ring = r
        self.derived = r.square.derived
        self.codomain = self.derived.ker_pbar

    def in_q(self, x: Nil2Element) -> Vector:
        m = self.ring.square
        return self.derived.q_proj(self.ring.mul_ee(m.H(x), m.T(m.H(x))))

    def of_element(self, x: Nil2Element) -> Vector:
        """``psi`` of the class of ``x``.

        Raises:
            ValidationError: If ``H(x) T H(x)`` leaves ``Ker(P)``
        """
        value = self.derived.ker_pbar_incl.preimage(self.in_q(x))
        if value is None:
            raise ValidationError("H(x) T H(x) is not in Ker(P)", check="psi.codomain",
                                  witness=self.ring.square.e.format(x))
        return value

    def __call__(self, xbar: Sequence[int]) -> Vector:
        return self.of_element(self.derived.coker.lift(xbar))


def psi(r: QuadraticRing) -> PsiMap:
    """The quadratic map ``psi`` of a commutative quadratic ring.

    Raises:
        ValidationError: If ``r`` is not commutative
    """
    commutativity_report(r).raise_for_failure()
    return PsiMap(r)


def psi_report(r: QuadraticRing) -> CheckReport:
    """Well-definedness of ``psi`` on ``P``-cosets and its sum and product laws.

    ``k(x)`` is represented by ``(x|x)_H``; both laws are compared in
    ``R_ee / (Id - T)``.
    """
    report = CheckReport(title=f"psi on {r.label}")
    if not report.merge(commutativity_report(r)).ok:
        return report
    f = PsiMap(r)
    m, gens, names, ee_gens = _ring_law_cases(r)
    q, qp = f.derived.q_group, f.derived.q_proj
    mee = r.mul_ee

    bad = None
    for g, x in enumerate(gens):
        try:
            f.of_element(x)
        except ValidationError as exc:
            bad = f"{names[g]}: {exc}"
            break
    report.add("psi.codomain", bad is None, bad)
    bad = _first_failure(
        [(f"{names[g]} + P ee{i}", x, a) for g, x in enumerate(gens) for i, a in enumerate(ee_gens)],
        lambda x, a: f.in_q(x + m.P(a)) == f.in_q(x),
    )
    report.add("psi.well_defined", bad is None, bad)

    samples = list(gens) + [x + y for x in gens for y in gens] + [2 * x for x in gens]
    pairs = [(f"({m.e.format(x)}, {m.e.format(y)})", x, y) for x in samples for y in gens]
    bad = _first_failure(pairs, lambda x, y: f.in_q(x + y) == q.sub(
        q.add(f.in_q(x), f.in_q(y)), qp(mee(m.cross(x, x), m.cross(y, y)))))
    report.add("psi.sum", bad is None, bad)

    def product_law(x, y):
        x2, y2 = r.mul(x, x), r.mul(y, y)
        hy, hx = m.H(y), m.H(x)
        rhs = q.add(
            qp(mee(m.cross(x2, x2), mee(hy, m.T(hy)))),
            qp(mee(mee(hx, m.T(hx)), m.cross(y2, y2))),
        )
        return f.in_q(r.mul(x, y)) == rhs

    bad = _first_failure(pairs, product_law)
    report.add("psi.product", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# Quadratic modules


class QuadraticModule:
    """A right ``R``-quadratic module.

    Attributes:
        square: The square group ``M``
        ring: The quadratic ring ``R``
        e_table: ``e_table[g][h]`` is ``m_g x_h`` for word generators
        ee_table: ``ee_table[i][j]`` is ``c_i a_j`` for canonical ee-generators
    """

    def __init__(
        self,
        square: SquareGroup,
        ring: QuadraticRing,
        e_table: Sequence[Sequence[Nil2Element]],
        ee_table: Sequence[Sequence[Sequence[int]]],
        label: Optional[str] = None,
        check: bool = True,
    ):
        rn, mn = ring.square.e.nwords, square.e.nwords
        if len(e_table) != mn or any(len(row) != rn for row in e_table):
            raise ValueError(f"e-level action table must be {mn}x{rn}")
        self.square = square
        self.ring = ring
        self.e_table = [list(row) for row in e_table]
        self.ee_table = [[square.ee.reduce(v) for v in row] for row in ee_table]
        self.label = label or f"{square.label} over {ring.label}"
        if check:
            validate_qmodule(self).raise_for_failure()

    def act_ee(self, c: Sequence[int], a: Sequence[int]) -> Vector:
        return self.square.ee.combine([
            (x * y, self.ee_table[i][j]) for i, x in enumerate(c) if x for j, y in enumerate(a) if y
        ])

    def act_words(self, mword: Syllables, xword: Syllables) -> Nil2Element:
        m, rs = self.square, self.ring.square
        acc = m.e.zero()
        for j, k in xword:
            if not k:
                continue
            hx = rs.H(rs.e.word_gen(j))
            acc = acc + k * extend_left(
                m.e, mword,
                lambda g: self.e_table[g][j],
                lambda u, v: m.P(self.act_ee(m.cross(v, u), hx)),
                m.e,
            )
        return acc

    def act_word(self, word: Syllables, x: Nil2Element) -> Nil2Element:
        return self.act_words(word, word_of(self.ring.square.e, x))

    def act(self, mm: Nil2Element, x: Nil2Element) -> Nil2Element:
        return self.act_words(word_of(self.square.e, mm), word_of(self.ring.square.e, x))


def regular_module(r: QuadraticRing) -> QuadraticModule:
    """``R`` as a right module over itself."""
    return QuadraticModule(r.square, r, r.e_table, r.ee_table, label=f"{r.label}_{r.label}")


def validate_qmodule(mod: QuadraticModule) -> CheckReport:
    """Check the right quadratic module axioms on generators."""
    m, r = mod.square, mod.ring
    rs = r.square
    report = CheckReport(title=f"quadratic module {mod.label}")
    mg, mnames = m.word_gens(), m.e.word_names()
    rg, rnames = rs.word_gens(), rs.e.word_names()
    act, aee = mod.act, mod.act_ee
    m_r = [(f"({mnames[a]}, {rnames[b]})", u, x) for a, u in enumerate(mg) for b, x in enumerate(rg)]
    mm_r = [
        (f"({mnames[a]}, {mnames[b]}, {rnames[c]})", u, v, x)
        for a, u in enumerate(mg) for b, v in enumerate(mg) for c, x in enumerate(rg)
    ]
    m_rr = [
        (f"({mnames[a]}, {rnames[b]}, {rnames[c]})", u, x, y)
        for a, u in enumerate(mg) for b, x in enumerate(rg) for c, y in enumerate(rg)
    ]
    c_a = [(f"(c{i}, a{j})", c, a) for i, c in enumerate(m.ee.gens()) for j, a in enumerate(rs.ee.gens())]
    c_x = [(f"(c{i}, {rnames[b]})", c, x) for i, c in enumerate(m.ee.gens()) for b, x in enumerate(rg)]
    m_a = [(f"({mnames[b]}, a{i})", u, a) for b, u in enumerate(mg) for i, a in enumerate(rs.ee.gens())]

    bad = None
    for a, u in enumerate(mg):
        for _, word in rs.e.relators:
            if not mod.act_words(word_of(m.e, u), word).is_zero():
                bad = f"{mnames[a]} times a relator"
        for _, word in m.e.relators:
            for x in rg:
                if not mod.act_word(word, x).is_zero():
                    bad = bad or "relator of M acting"
    report.add("qmodule.well_defined", bad is None, bad)
    bad = _first_failure([(mnames[a], u) for a, u in enumerate(mg)], lambda u: act(u, r.one) == u)
    report.add("qmodule.unit", bad is None, bad)
    bad = _first_failure(m_rr, lambda u, x, y: act(act(u, x), y) == act(u, r.mul(x, y)))
    report.add("qmodule.associative", bad is None, bad)
    bad = _first_failure(m_rr, lambda u, x, y: act(u, x + y) == act(u, x) + act(u, y))
    report.add("qmodule.additive", bad is None, bad)
    bad = _first_failure(mm_r, lambda u, v, x: act(u + v, x) == act(u, x) + act(v, x) + m.P(aee(m.cross(v, u), rs.H(x))))
    report.add("qmodule.right_distributive", bad is None, bad)
    bad = None
    for _, u, x in m_r:
        for label, v, y in m_r:
            if aee(m.cross(u, v), rs.cross(x, y)) != m.ee.reduce(m.cross(act(u, x), act(v, y))):
                bad = label
                break
        if bad:
            break
    report.add("qmodule.cross", bad is None, bad)
    bad = _first_failure(c_a, lambda c, a: not any(m.ee.add(m.T(aee(c, a)), aee(m.T(c), rs.T(a)))))
    report.add("qmodule.t", bad is None, bad)
    bad = _first_failure(c_x, lambda c, x: m.P(aee(c, rs.delta(x))) == act(m.P(c), x))
    report.add("qmodule.p_delta", bad is None, bad)
    bad = _first_failure(m_a, lambda u, a: m.P(aee(m.cross(u, u), a)) == act(u, rs.P(a)))
    report.add("qmodule.p_cross", bad is None, bad)
    bad = _first_failure(m_r, lambda u, x: m.ee.reduce(m.H(act(u, x))) == m.ee.add(aee(m.cross(u, u), rs.H(x)), aee(m.H(u), rs.delta(x))))
    report.add("qmodule.h", bad is None, bad)
    one = r.ee_one
    bad = _first_failure([(f"c{i}", c) for i, c in enumerate(m.ee.gens())], lambda c: aee(c, one) == m.ee.reduce(c))
    report.add("qmodule.ee_unit", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# Square rings


class SquareRing:
    """A monoid in ``(SG, [])``.

    Attributes:
        square: The square group ``Q``
        e_table: Products of word generators of ``Q_e``
        one: Multiplicative unit
        left_table: ``left_table[i][j]`` is ``u -> (c_i (x) c_j) . u`` for canonical
            generators ``c`` of ``Coker(P)``
        right_table: ``right_table[k]`` is ``u -> u . c_k``
    """

    def __init__(
        self,
        square: SquareGroup,
        e_table: Sequence[Sequence[Nil2Element]],
        one: Nil2Element,
        left_table: Sequence[Sequence[FgabHom]],
        right_table: Sequence[FgabHom],
        label: Optional[str] = None,
        check: bool = True,
    ):
        self.square = square
        self.e_table = [list(row) for row in e_table]
        self.one = one
        self.left_table = [list(row) for row in left_table]
        self.right_table = list(right_table)
        self.coker = square.coker
        self.label = label or square.label
        if check:
            validate_sqring(self).raise_for_failure()

    def __repr__(self) -> str:
        return f"SquareRing({self.label})"

    def left(self, t: Sequence[int], s: Sequence[int], u: Sequence[int]) -> Vector:
        """``(t (x) s) . u`` for ``t, s`` in ``Coker(P)``."""
        ee = self.square.ee
        return ee.combine([
            (a * b, self.left_table[i][j](u)) for i, a in enumerate(t) if a for j, b in enumerate(s) if b
        ])

    def right(self, u: Sequence[int], r: Sequence[int]) -> Vector:
        """``u . r`` for ``r`` in ``Coker(P)``."""
        return self.square.ee.combine([(a, self.right_table[k](u)) for k, a in enumerate(r) if a])

    def mul_words(self, xword: Syllables, yword: Syllables) -> Nil2Element:
        m = self.square
        acc = m.e.zero()
        for j, k in yword:
            if not k:
                continue
            hz = m.H(m.e.word_gen(j))
            acc = acc + k * extend_left(
                m.e, xword,
                lambda g: self.e_table[g][j],
                lambda u, v: m.P(self.left(self.coker(u), self.coker(v), hz)),
                m.e,
            )
        return acc

    def mul_word(self, word: Syllables, y: Nil2Element) -> Nil2Element:
        return self.mul_words(word, word_of(self.square.e, y))

    def mul(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.mul_word(word_of(self.square.e, x), y)

    def coker_mul(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.coker(self.mul(self.coker.lift(a), self.coker.lift(b)))


def validate_sqring(q: SquareRing) -> CheckReport:
    """Check the square ring axioms, the trimodule laws and ``Delta(a) = H(2) . a-bar``."""
    m = q.square
    e, ee = m.e, m.ee
    cg = q.coker.group
    report = CheckReport(title=f"square ring {q.label}")
    gens, names = m.word_gens(), e.word_names()
    cm = q.coker
    pairs = [(f"({names[g]}, {names[h]})", x, y) for g, x in enumerate(gens) for h, y in enumerate(gens)]
    triples = [
        (f"({names[g]}, {names[h]}, {names[k]})", x, y, z)
        for g, x in enumerate(gens) for h, y in enumerate(gens) for k, z in enumerate(gens)
    ]
    ee_gens = ee.gens()
    mixed = [(f"(ee{i}, {names[g]})", a, x) for i, a in enumerate(ee_gens) for g, x in enumerate(gens)]

    bad = None
    for g, x in enumerate(gens):
        for _, word in e.relators:
            if not q.mul_word(word, x).is_zero() or not q.mul_words(word_of(e, x), word).is_zero():
                bad = f"relator against {names[g]}"
                break
        if bad:
            break
    report.add("sqring.well_defined", bad is None, bad)
    bad = None
    for k, d in enumerate(cg.invariants):
        if d and (not q.right_table[k].scaled(d).is_zero()
                  or any(not q.left_table[k][j].scaled(d).is_zero() or not q.left_table[j][k].scaled(d).is_zero()
                         for j in range(cg.rank))):
            bad = f"coker generator {k} of order {d}"
    report.add("sqring.action_well_defined", bad is None, bad)
    bad = _first_failure([(names[g], x) for g, x in enumerate(gens)], lambda x: q.mul(q.one, x) == x and q.mul(x, q.one) == x)
    report.add("sqring.unit", bad is None, bad)
    bad = _first_failure(triples, lambda x, y, z: q.mul(q.mul(x, y), z) == q.mul(x, q.mul(y, z)))
    report.add("sqring.associative", bad is None, bad)

    two = q.one + q.one
    h2 = m.H(two)
    bad = _first_failure(pairs, lambda x, y: ee.reduce(m.cross(x, y)) == q.left(cm(y), cm(x), h2))
    report.add("sqring.cross", bad is None, bad)
    bad = _first_failure(
        [(f"{lab}, ee{i}", x, y, z, a) for lab, x, y, z in triples for i, a in enumerate(ee_gens)],
        lambda x, y, z, a: m.T(q.right(q.left(cm(x), cm(y), a), cm(z))) == q.right(q.left(cm(y), cm(x), m.T(a)), cm(z)),
    )
    report.add("sqring.t", bad is None, bad)
    bad = _first_failure(mixed, lambda a, x: q.mul(m.P(a), x) == m.P(q.right(a, cm(x))))
    report.add("sqring.p_right", bad is None, bad)
    bad = _first_failure(mixed, lambda a, x: q.mul(x, m.P(a)) == m.P(q.left(cm(x), cm(x), a)))
    report.add("sqring.p_left", bad is None, bad)
    bad = _first_failure(pairs, lambda x, y: ee.reduce(m.H(q.mul(x, y))) == ee.add(q.left(cm(x), cm(x), m.H(y)), q.right(m.H(x), cm(y))))
    report.add("sqring.h_product", bad is None, bad)
    bad = _first_failure(triples, lambda x, y, z: q.mul(x + y, z) == q.mul(x, z) + q.mul(y, z) + m.P(q.left(cm(x), cm(y), m.H(z))))
    report.add("sqring.right_distributive", bad is None, bad)
    bad = _first_failure(triples, lambda x, y, z: q.mul(x, y + z) == q.mul(x, y) + q.mul(x, z))
    report.add("sqring.left_distributive", bad is None, bad)

    cgens = cg.gens()
    one_bar = cm(q.one)
    bad = _first_failure([(f"ee{i}", a) for i, a in enumerate(ee_gens)],
                         lambda a: q.left(one_bar, one_bar, a) == ee.reduce(a) and q.right(a, one_bar) == ee.reduce(a))
    report.add("sqring.trimodule_unit", bad is None, bad)
    bad = None
    for (i, t), (j, s), (k, t2), (l, s2) in cartesian(enumerate(cgens), repeat=4):
        for c, a in enumerate(ee_gens):
            lhs = q.left(t, s, q.left(t2, s2, a))
            rhs = q.left(q.coker_mul(t, t2), q.coker_mul(s, s2), a)
            if lhs != rhs:
                bad = f"(c{i} (x) c{j})(c{k} (x) c{l}) on ee{c}"
                break
        if bad:
            break
    report.add("sqring.trimodule_left", bad is None, bad)
    bad = None
    for (i, r1), (j, r2) in cartesian(enumerate(cgens), repeat=2):
        for c, a in enumerate(ee_gens):
            if q.right(q.right(a, r1), r2) != q.right(a, q.coker_mul(r1, r2)):
                bad = f"ee{c} . c{i} . c{j}"
            for (k, t), (l, s) in cartesian(enumerate(cgens), repeat=2):
                if q.left(t, s, q.right(a, r1)) != q.right(q.left(t, s, a), r1):
                    bad = bad or f"(c{k} (x) c{l}) . ee{c} . c{i}"
        if bad:
            break
    report.add("sqring.trimodule_compatible", bad is None, bad)
    bad = _first_failure([(names[g], x) for g, x in enumerate(gens)], lambda x: ee.reduce(m.delta(x)) == q.right(h2, cm(x)))
    report.add("sqring.delta", bad is None, bad)
    return report


def qr_to_sr(r: QuadraticRing) -> SquareRing:
    """``U(R)``: same square group and product, ``(x (x) y) . a . z = (y|x)_H a Delta(z)``."""
    m = r.square
    coker = m.coker
    lifts = [coker.lift(c) for c in coker.group.gens()]
    ee = m.ee
    left_table = [
        [FgabHom.from_function(ee, ee, lambda u, x=x, y=y: r.mul_ee(m.cross(y, x), u)) for y in lifts]
        for x in lifts
    ]
    right_table = [FgabHom.from_function(ee, ee, lambda u, z=z: r.mul_ee(u, m.delta(z))) for z in lifts]
    return SquareRing(m, r.e_table, r.one, left_table, right_table, label=f"U({r.label})")


# ---------------------------------------------------------------------------
# Coker(P) as a ring


def coker_ring(r: QuadraticRing) -> QuadraticRing:
    """``Coker(P_R)`` with the induced multiplication, as a quadratic ring with ``ee = 0``."""
    coker = r.square.coker
    cg = coker.group
    square = from_abelian(cg, label=f"Coker(P_{r.label})")
    e = square.e
    lifts = [coker.lift(c) for c in cg.gens()]
    table = [[e.element(list(coker(r.mul(x, y)))) for y in lifts] for x in lifts]
    return QuadraticRing(square, table, [], e.element(list(coker(r.one))), label=square.label)


def coker_projection(r: QuadraticRing, target: Optional[QuadraticRing] = None) -> SgMorphism:
    """The unit ``R -> Coker(P_R)`` of the reflection into rings."""
    target = target or coker_ring(r)
    coker = r.square.coker
    e = target.square.e
    return SgMorphism.from_images(
        r.square, target.square,
        [e.element(list(coker(w))) for w in r.square.word_gens()],
        [() for _ in r.square.ee.gens()],
    )


def coker_adjunction_report(r: QuadraticRing, s: Optional[QuadraticRing] = None) -> CheckReport:
    """``R -> Coker(P_R)`` is a ring map; a ring map into ``s`` with ``s_ee = 0``
    factors through it when ``s`` is given."""
    report = CheckReport(title=f"Coker(P) reflection of {r.label}")
    target = coker_ring(r)
    unit = coker_projection(r, target)
    report.merge(ring_morphism_report(unit, r, target))
    report.add("coker_ring.epi", unit.fe.is_surjective())
    if s is not None:
        if s.square.ee.rank:
            report.skip("coker_ring.factor", f"{s.label} has a nonzero ee-level")
        else:
            report.add("coker_ring.factor", coker_ring(s).square.e.abelianization.group.isomorphic(s.square.e.abelianization.group))
    return report


# ---------------------------------------------------------------------------
# Exploration


def find_commutative_qrings(m: SquareGroup, bound: int = 2) -> List[QuadraticRing]:
    """Search commutative quadratic ring structures on a square group with one
    word generator and ee-rank at most one, taking structure constants and the
    unit from ``[-bound, bound]``.

    This is an exploration utility: it lists what passes the checks.

    Raises:
        UnsupportedInstanceError: For larger square groups
    """
    if m.e.nwords != 1 or m.ee.rank > 1:
        raise UnsupportedInstanceError(f"ring search needs one e-generator and ee-rank <= 1, got {m.label}")
    g = m.e.word_gen(0)
    span = range(-bound, bound + 1)
    ee_choices = [[[m.ee.scale(j, m.ee.gen(0))]] for j in span] if m.ee.rank else [[]]
    found = []
    for k, table_ee, a in cartesian(span, ee_choices, span):
        if a == 0:
            continue
        ring = QuadraticRing(m, [[k * g]], table_ee, a * g, label=f"{m.label}[g*g={k}g, 1={a}g]", check=False)
        if validate_qring(ring).ok and is_commutative_qring(ring):
            found.append(ring)
    logger.info(f"found {len(found)} commutative quadratic ring structures on {m.label}")
    return found
