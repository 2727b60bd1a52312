"""Finitely generated nilpotence-class-two groups.

A ``Nil2Datum`` describes a group as ``G~ / N`` where ``G~ = Z^n x_beta C``
is the central extension of a lattice by a finitely generated abelian group
``C`` with bilinear cocycle ``beta``::

    (v, c) + (v', c') = (v + v', c + c' + beta(v, v'))

and ``N`` is generated by central relation elements ``(b, rho)``. Elements
are kept in normal form: the lattice part is reduced against the Hermite
basis of the relation lattice and the central part is an element of ``C``.

Words are lists of ``(generator, exponent)`` syllables over the *word
generators*: the lattice generators followed by the canonical generators of
``C``.
"""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .checks import CheckReport
from .utils import (
    NonRepresentableQuotientError,
    ValidationError,
    binom2,
    setup_logger,
    shared_property,
)
from .zalgebra import (
    FgAbelianGroup,
    FgabHom,
    Rows,
    Vector,
    echelon_form,
    direct_sum,
    left_kernel,
    smith_rows,
    solve_left,
    solve_with_echelon,
    subgroup,
    unit_vector,
    vec_mat,
)


logger = setup_logger(__name__)

Syllables = List[Tuple[int, int]]


def commutator_word(a: int, b: int) -> Syllables:
    """Syllables of ``[a, b] = -a - b + a + b``."""
    return [(a, -1), (b, -1), (a, 1), (b, 1)]


def _term(k: int, name: str) -> str:
    if k == 1:
        return name
    if k == -1:
        return f"-{name}"
    return f"{k}{name}"


# ---------------------------------------------------------------------------
# Central-extension arithmetic


class _Cocycle:
    """Arithmetic of ``Z^n x_beta C`` without any relations."""

    def __init__(self, central: FgAbelianGroup, beta: Sequence[Sequence[Vector]]):
        self.central = central
        self.n = len(beta)
        self.terms = [
            (i, j, beta[i][j])
            for i in range(self.n) for j in range(self.n) if any(beta[i][j])
        ]

    def form(self, u: Sequence[int], w: Sequence[int]) -> Vector:
        return self.central.combine([(u[i] * w[j], b) for i, j, b in self.terms if u[i] and w[j]])

    def lam(self, u: Sequence[int], w: Sequence[int]) -> Vector:
        return self.central.sub(self.form(u, w), self.form(w, u))

    def quad(self, v: Sequence[int]) -> Vector:
        """``q(v)``, the central part of the ordered word ``v_1 e_1 + ... + v_n e_n``."""
        terms = []
        for i, j, b in self.terms:
            if i == j and v[i]:
                terms.append((binom2(v[i]), b))
            elif i < j and v[i] and v[j]:
                terms.append((v[i] * v[j], b))
        return self.central.combine(terms)

    def add(self, x: Tuple[Sequence[int], Sequence[int]], y: Tuple[Sequence[int], Sequence[int]]):
        (v, c), (w, d) = x, y
        return (
            [a + b for a, b in zip(v, w)],
            self.central.add(c, d, self.form(v, w)),
        )

    def scale(self, k: int, x: Tuple[Sequence[int], Sequence[int]]):
        v, c = x
        return (
            [k * a for a in v],
            self.central.combine([(k, c), (binom2(k), self.form(v, v))]),
        )

    def zero(self):
        return ([0] * self.n, self.central.zero())


# ---------------------------------------------------------------------------
# Elements


@dataclass(frozen=True, eq=False)
class Nil2Element:
    """Element ``(v, c)`` of a Nil2Datum in normal form."""

    owner: "Nil2Datum"
    v: Vector
    c: Vector

    def __add__(self, other: "Nil2Element") -> "Nil2Element":
        return self.owner.add(self, other)

    def __sub__(self, other: "Nil2Element") -> "Nil2Element":
        return self.owner.add(self, self.owner.neg(other))

    def __neg__(self) -> "Nil2Element":
        return self.owner.neg(self)

    def __rmul__(self, k: int) -> "Nil2Element":
        return self.owner.scale(k, self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Nil2Element)
            and other.owner is self.owner
            and other.v == self.v
            and other.c == self.c
        )

    def __hash__(self) -> int:
        return hash((id(self.owner), self.v, self.c))

    def is_zero(self) -> bool:
        return not any(self.v) and not any(self.c)

    def is_central_part(self) -> bool:
        return not any(self.v)

    def __repr__(self) -> str:
        return self.owner.format(self)


# ---------------------------------------------------------------------------
# Data


class Nil2Datum:
    """Nilpotence-class-two group as a central-extension datum.

    Attributes:
        names: Lattice generator names (ordering is part of the datum)
        central: The central group C
        beta: ``n x n`` grid of C-elements, the bilinear cocycle
        relations: Relation elements ``(b, rho)`` as given
        central_names: Names of the canonical generators of C
    """

    def __init__(
        self,
        names: Sequence[str],
        central: Optional[FgAbelianGroup] = None,
        beta: Optional[Sequence[Sequence[Sequence[int]]]] = None,
        relations: Iterable[Tuple[Sequence[int], Sequence[int]]] = (),
        central_names: Optional[Sequence[str]] = None,
    ):
        self.names = tuple(names)
        self.n = len(self.names)
        if len(set(self.names)) != self.n:
            raise ValueError(f"generator names must be distinct: {self.names}")
        self.central = central if central is not None else FgAbelianGroup.trivial()
        q = self.central.rank
        if beta is None:
            beta = [[self.central.zero()] * self.n for _ in range(self.n)]
        if len(beta) != self.n or any(len(row) != self.n for row in beta):
            raise ValueError(f"cocycle must be a {self.n}x{self.n} grid")
        for row in beta:
            for entry in row:
                if len(entry) != q:
                    raise ValueError(f"cocycle entries must have {q} central coordinates")
        self.beta: Tuple[Tuple[Vector, ...], ...] = tuple(
            tuple(self.central.reduce(entry) for entry in row) for row in beta
        )
        rels = []
        for b, rho in relations:
            if len(b) != self.n or len(rho) != q:
                raise ValueError(f"relation ({b}, {rho}) has the wrong shape")
            rels.append((tuple(int(x) for x in b), self.central.reduce(rho)))
        self.relations: Tuple[Tuple[Vector, Vector], ...] = tuple(rels)
        if central_names is None:
            central_names = self.central.labels if self.central.labels and len(self.central.labels) == q else None
        if central_names is None:
            central_names = [f"z{j}" for j in range(q)]
        self.central_names = tuple(central_names)
        self.cocycle = _Cocycle(self.central, self.beta)

    # -- constructors -------------------------------------------------------

    @classmethod
    def free(cls, names: Sequence[str]) -> "Nil2Datum":
        """Free nil2 group on ordered generators.

        Uses ``beta(e_i, e_j) = -e_j ^ e_i`` for ``i > j``, so ordered words
        have zero central part and ``[e_a, e_b] = e_a ^ e_b`` for ``a < b``.
        """
        names = list(names)
        n = len(names)
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        index = {p: k for k, p in enumerate(pairs)}
        labels = [f"[{names[a]},{names[b]}]" for a, b in pairs]
        central = FgAbelianGroup.free(len(pairs), labels)
        npairs = len(pairs)
        beta = [[[0] * npairs for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(i):
                beta[i][j][index[(j, i)]] = -1
        datum = cls(names, central, beta, central_names=labels)
        datum.pair_index = index
        return datum

    @classmethod
    def abelian(cls, group: FgAbelianGroup, names: Optional[Sequence[str]] = None) -> "Nil2Datum":
        """The abelian group ``group`` on its canonical generators."""
        r = group.rank
        if names is None:
            names = list(group.labels) if group.labels and len(group.labels) == r else [f"a{i}" for i in range(r)]
        relations = [(unit_vector(r, i, d), ()) for i, d in enumerate(group.invariants) if d]
        return cls(names, FgAbelianGroup.trivial(), None, relations)

    @classmethod
    def trivial(cls) -> "Nil2Datum":
        return cls([])

    # -- normalization ------------------------------------------------------

    @shared_property
    def _normalized(self) -> Tuple[List[Tuple[List[int], Vector]], List[int], List[Vector]]:
        rows = [list(b) for b, _ in self.relations]
        h, u, pivots = echelon_form(rows, self.n)
        combos = []
        for t in range(len(rows)):
            acc = self.cocycle.zero()
            for j, coeff in enumerate(u[t]):
                if coeff:
                    acc = self.cocycle.add(acc, self.cocycle.scale(coeff, (list(self.relations[j][0]), self.relations[j][1])))
            combos.append(acc)
        k = len(pivots)
        basis = [(h[t], combos[t][1]) for t in range(k)]
        leftovers = [combos[t][1] for t in range(k, len(rows))]
        return basis, pivots, leftovers

    @property
    def relation_basis(self) -> List[Tuple[List[int], Vector]]:
        """Hermite-normalized relation elements ``(h_t, c_t)``."""
        return self._normalized[0]

    @property
    def pivots(self) -> List[int]:
        return self._normalized[1]

    def relation_lattice(self) -> Rows:
        return [list(h) for h, _ in self.relation_basis]

    # -- elements -----------------------------------------------------------

    @property
    def nwords(self) -> int:
        return self.n + self.central.rank

    def word_names(self) -> List[str]:
        return list(self.names) + list(self.central_names)

    def reduce(self, v: Sequence[int], c: Sequence[int]) -> Nil2Element:
        v = list(v)
        c = self.central.reduce(c)
        for (h, ch), p in zip(self.relation_basis, self.pivots):
            q = v[p] // h[p]
            if q:
                v, c = self.cocycle.add((v, c), self.cocycle.scale(-q, (h, ch)))
        return Nil2Element(self, tuple(v), c)

    def element(self, v: Sequence[int], c: Optional[Sequence[int]] = None) -> Nil2Element:
        if len(v) != self.n:
            raise ValueError(f"expected {self.n} lattice coordinates, got {len(v)}")
        return self.reduce(v, c if c is not None else self.central.zero())

    def zero(self) -> Nil2Element:
        return Nil2Element(self, (0,) * self.n, self.central.zero())

    def gen(self, i: int) -> Nil2Element:
        return self.reduce(unit_vector(self.n, i), self.central.zero())

    def central_element(self, c: Sequence[int]) -> Nil2Element:
        return self.reduce([0] * self.n, c)

    def word_gen(self, g: int) -> Nil2Element:
        if g < self.n:
            return self.gen(g)
        return self.central_element(self.central.gen(g - self.n))

    def word_gens(self) -> List[Nil2Element]:
        return [self.word_gen(g) for g in range(self.nwords)]

    def _check_owner(self, *xs: Nil2Element) -> None:
        for x in xs:
            if x.owner is not self:
                raise ValueError("element belongs to a different nil2 datum")

    def add(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        self._check_owner(x, y)
        v, c = self.cocycle.add((x.v, x.c), (y.v, y.c))
        return self.reduce(v, c)

    def neg(self, x: Nil2Element) -> Nil2Element:
        self._check_owner(x)
        v, c = self.cocycle.scale(-1, (x.v, x.c))
        return self.reduce(v, c)

    def scale(self, k: int, x: Nil2Element) -> Nil2Element:
        self._check_owner(x)
        v, c = self.cocycle.scale(k, (x.v, x.c))
        return self.reduce(v, c)

    def sum(self, xs: Iterable[Nil2Element]) -> Nil2Element:
        acc = self.zero()
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def commutator(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """``[x, y] = -x - y + x + y``."""
        self._check_owner(x, y)
        return self.central_element(self.cocycle.lam(x.v, y.v))

    def is_central(self, x: Nil2Element) -> bool:
        return all(self.commutator(x, self.gen(i)).is_zero() for i in range(self.n))

    def word_coords(self, x: Nil2Element) -> Tuple[int, ...]:
        """Exponents of the ordered word ``v_1 e_1 + ... + v_n e_n + m`` equal to ``x``."""
        self._check_owner(x)
        m = self.central.sub(x.c, self.cocycle.quad(x.v))
        return tuple(x.v) + tuple(m)

    def from_word_coords(self, coords: Sequence[int]) -> Nil2Element:
        """Value of the ordered word with the given exponents."""
        v = list(coords[:self.n])
        m = coords[self.n:]
        return self.reduce(v, self.central.add(self.cocycle.quad(v), self.central.reduce(m)))

    def eval_word(self, word: Syllables) -> Nil2Element:
        acc = self.zero()
        for g, k in word:
            if k:
                acc = self.add(acc, self.scale(k, self.word_gen(g)))
        return acc

    def abelianized(self, word: Syllables) -> List[int]:
        out = [0] * self.nwords
        for g, k in word:
            out[g] += k
        return out

    # -- presentation -------------------------------------------------------

    @shared_property
    def relators(self) -> List[Tuple[str, Syllables]]:
        """Named relators presenting the group on its word generators."""
        n, cen = self.n, self.central
        out: List[Tuple[str, Syllables]] = []
        for j, d in enumerate(cen.invariants):
            if d:
                out.append((f"torsion({self.central_names[j]})", [(n + j, d)]))
        for j in range(cen.rank):
            for g in list(range(n)) + list(range(n + j + 1, n + cen.rank)):
                out.append((f"central({self.central_names[j]},{self.word_names()[g]})", commutator_word(n + j, g)))
        for a in range(n):
            for b in range(a + 1, n):
                lam = self.cocycle.lam(unit_vector(n, a), unit_vector(n, b))
                word = commutator_word(a, b) + [(n + j, -x) for j, x in enumerate(lam) if x]
                out.append((f"commutator({self.names[a]},{self.names[b]})", word))
        for t, (h, ch) in enumerate(self.relation_basis):
            m = cen.sub(ch, self.cocycle.quad(h))
            word = [(i, x) for i, x in enumerate(h) if x] + [(n + j, x) for j, x in enumerate(m) if x]
            out.append((f"relation{t}", word))
        return out

    @shared_property
    def abelianization(self) -> "AbelianImage":
        return self.abelian_quotient([])

    def abelian_quotient(self, extra: Sequence[Nil2Element]) -> "AbelianImage":
        """Abelian group ``G / ([G, G] + <extra>)`` with its projection."""
        rels = [self.abelianized(word) for _, word in self.relators]
        rels += [list(self.word_coords(x)) for x in extra]
        group = FgAbelianGroup(self.nwords, rels, self.word_names())
        return AbelianImage(self, group)

    # -- structure ----------------------------------------------------------

    def is_trivial(self) -> bool:
        return self.abelianization.group.is_trivial()

    def is_abelian(self) -> bool:
        return all(
            self.commutator(self.gen(a), self.gen(b)).is_zero()
            for a in range(self.n) for b in range(a + 1, self.n)
        )

    def is_finite(self) -> bool:
        return len(self.pivots) == self.n and self.central.is_finite()

    def order(self) -> Optional[int]:
        if not self.is_finite():
            return None
        total = self.central.order()
        for (h, _), p in zip(self.relation_basis, self.pivots):
            total *= h[p]
        return total

    def elements(self) -> Iterator[Nil2Element]:
        """All elements of a finite datum, in a fixed order.

        Raises:
            ValueError: If the datum is infinite
        """
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite nil2 group")
        ranges = [range(h[p]) for (h, _), p in zip(self.relation_basis, self.pivots)]
        order = sorted(range(len(self.pivots)), key=lambda t: self.pivots[t])
        for values in cartesian(*[ranges[t] for t in order]):
            v = [0] * self.n
            for t, x in zip(order, values):
                v[self.pivots[t]] = x
            for c in self.central.elements():
                yield Nil2Element(self, tuple(v), c)

    def format(self, x: Nil2Element) -> str:
        parts = []
        for name, k in zip(self.names, x.v):
            if k:
                parts.append(_term(k, name))
        for name, k in zip(self.central_names, x.c):
            if k:
                parts.append(_term(k, name))
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def __repr__(self) -> str:
        return f"Nil2Datum(gens={list(self.names)}, central={self.central}, relations={len(self.relations)})"

    # -- quotients ----------------------------------------------------------

    def quotient_by(self, relators: Sequence[Nil2Element], names: Optional[Sequence[str]] = None) -> "Nil2Quotient":
        """Quotient by the normal closure of ``relators``.

        The lattice is re-split along the Smith form of the new relation
        lattice so that killed generators disappear.

        Args:
            relators: Elements to kill
            names: Optional names for the surviving lattice generators

        Returns:
            Nil2Quotient with the new datum, the projection and a section

        Raises:
            NonRepresentableQuotientError: If the new datum fails validation
        """
        for x in relators:
            self._check_owner(x)
        n, cen = self.n, self.central

        # Commutators of relators with everything become trivial.
        lam_elems = []
        for x in relators:
            if any(x.v):
                for i in range(n):
                    lam = self.cocycle.lam(x.v, unit_vector(n, i))
                    if any(lam):
                        lam_elems.append(list(lam))
        c1, p1 = cen.quotient(lam_elems)
        beta1 = [[p1(self.beta[i][j]) for j in range(n)] for i in range(n)]
        cyc1 = _Cocycle(c1, beta1)

        gammas = [(list(h), p1(ch)) for h, ch in self.relation_basis]
        gammas += [(list(x.v), p1(x.c)) for x in relators]
        h, u, pivots = echelon_form([g[0] for g in gammas], n)
        combos = []
        for t in range(len(gammas)):
            acc = cyc1.zero()
            for j, coeff in enumerate(u[t]):
                if coeff:
                    acc = cyc1.add(acc, cyc1.scale(coeff, gammas[j]))
            combos.append(acc)
        k = len(pivots)
        leftovers = [list(c) for _, c in combos[k:] if any(c)]
        c2, p2 = c1.quotient(leftovers)
        beta2 = [[p2(beta1[i][j]) for j in range(n)] for i in range(n)]
        cyc2 = _Cocycle(c2, beta2)
        rows2 = [(h[t], p2(combos[t][1])) for t in range(k)]

        form = smith_rows([r for r, _ in rows2], n)
        diag = form.diagonal() + [0] * (n - len(form.diagonal()))
        basis = form.v_inv
        beta3 = [[cyc2.form(basis[i], basis[j]) for j in range(n)] for i in range(n)]
        cyc3 = _Cocycle(c2, beta3)
        rho3 = []
        for i in range(k):
            acc = cyc2.zero()
            for t, coeff in enumerate(form.u[i]):
                if coeff:
                    acc = cyc2.add(acc, cyc2.scale(coeff, rows2[t]))
            rho3.append(acc[1])

        units = [i for i in range(k) if diag[i] == 1]
        kept = [i for i in range(n) if not (i < k and diag[i] == 1)]
        if names is None:
            names = []
            for i in kept:
                src = [j for j, x in enumerate(basis[i]) if x]
                if len(src) == 1 and basis[i][src[0]] == 1:
                    names.append(self.names[src[0]])
                else:
                    names.append(f"u{i}")
            if len(set(names)) != len(names):
                names = [f"u{i}" for i in kept]
        new_relations = []
        for pos, i in enumerate(kept):
            if i < k:
                new_relations.append((unit_vector(len(kept), pos, diag[i]), rho3[i]))
        quotient = Nil2Datum(
            names,
            c2,
            [[beta3[i][j] for j in kept] for i in kept],
            new_relations,
        )

        def to_quotient(v: Sequence[int], c: Sequence[int]) -> Nil2Element:
            y = vec_mat(v, form.v, n)
            y_kept = [0] * n
            y_units = [0] * n
            for i in kept:
                y_kept[i] = y[i]
            for i in units:
                y_units[i] = y[i]
            acc = cyc3.zero()
            for i in units:
                if y[i]:
                    acc = cyc3.add(acc, cyc3.scale(y[i], (unit_vector(n, i), rho3[i])))
            correction = c2.add(cyc3.form(y_kept, y_units), acc[1])
            c_new = c2.sub(p2(p1(c)), correction)
            return quotient.element([y[i] for i in kept], c_new)

        images = [to_quotient(unit_vector(n, i), cen.zero()) for i in range(n)]
        images += [to_quotient([0] * n, cen.gen(j)) for j in range(cen.rank)]

        section = [self.reduce(basis[i], cen.zero()) for i in kept]
        for j in range(c2.rank):
            lift1 = c2.to_gens(c2.gen(j))
            lift0 = c1.to_gens(c1.reduce(lift1))
            section.append(self.central_element(cen.reduce(lift0)))

        report = validate_nil2(quotient)
        if not report.ok:
            raise NonRepresentableQuotientError(
                f"quotient datum fails validation: {report.first_failure().name} "
                f"({report.first_failure().witness})"
            )
        projection = Nil2Hom(self, quotient, images, check=False)
        logger.debug(
            f"quotient: {n} -> {quotient.n} lattice generators, central {cen} -> {c2}"
        )
        return Nil2Quotient(quotient, projection, section)

    def product(self, other: "Nil2Datum") -> "Nil2Product":
        return nil2_product(self, other)


@dataclass
class AbelianImage:
    """An abelian quotient of a nil2 datum with its projection."""

    datum: Nil2Datum
    group: FgAbelianGroup

    def __call__(self, x: Nil2Element) -> Vector:
        return self.group.from_gens(list(self.datum.word_coords(x)))

    def lift(self, a: Sequence[int]) -> Nil2Element:
        return self.datum.from_word_coords(self.group.to_gens(a))


@dataclass
class Nil2Quotient:
    """Quotient datum with projection and a section on word generators."""

    datum: Nil2Datum
    projection: "Nil2Hom"
    section: List[Nil2Element]

    def lift(self, y: Nil2Element) -> Nil2Element:
        source = self.projection.source
        acc = source.zero()
        for g, k in enumerate(self.datum.word_coords(y)):
            if k:
                acc = acc + k * self.section[g]
        return acc


@dataclass
class Nil2Product:
    datum: Nil2Datum
    factors: List[Nil2Datum]
    injections: List["Nil2Hom"]
    projections: List["Nil2Hom"]

    def pair(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.injections[0](x) + self.injections[1](y)


def nil2_product(left: Nil2Datum, right: Nil2Datum) -> Nil2Product:
    """Direct product of two data with injections and projections."""
    summed = direct_sum([left.central, right.central])
    inj_l, inj_r = summed.injections
    n1, n2 = left.n, right.n
    n = n1 + n2
    zero = summed.group.zero()
    beta = [[zero] * n for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            beta[i][j] = inj_l(left.beta[i][j])
    for i in range(n2):
        for j in range(n2):
            beta[n1 + i][n1 + j] = inj_r(right.beta[i][j])
    relations = [(list(h) + [0] * n2, inj_l(c)) for h, c in left.relation_basis]
    relations += [([0] * n1 + list(h), inj_r(c)) for h, c in right.relation_basis]
    names = list(left.names) + list(right.names)
    if len(set(names)) != len(names):
        names = [f"{x}.1" for x in left.names] + [f"{x}.2" for x in right.names]
    datum = Nil2Datum(names, summed.group, beta, relations)

    def inject(factor: Nil2Datum, offset: int, inj: FgabHom) -> "Nil2Hom":
        images = [datum.element(unit_vector(n, offset + i)) for i in range(factor.n)]
        images += [datum.central_element(inj(factor.central.gen(j))) for j in range(factor.central.rank)]
        return Nil2Hom(factor, datum, images, check=False)

    def project(factor: Nil2Datum, offset: int, proj: FgabHom) -> "Nil2Hom":
        images = []
        for i in range(n):
            if offset <= i < offset + factor.n:
                images.append(factor.gen(i - offset))
            else:
                images.append(factor.zero())
        images += [factor.central_element(proj(summed.group.gen(j))) for j in range(summed.group.rank)]
        return Nil2Hom(datum, factor, images, check=False)

    return Nil2Product(
        datum,
        [left, right],
        [inject(left, 0, inj_l), inject(right, n1, inj_r)],
        [project(left, 0, summed.projections[0]), project(right, n1, summed.projections[1])],
    )


def validate_nil2(d: Nil2Datum) -> CheckReport:
    """Check the consistency conditions of a datum.

    CN1: relation elements are central; CN2: the relation subgroup meets the
    central group trivially (the relation correction is additive up to the
    cocycle); CN3: the group commutator of two generators equals the
    alternating pairing ``lambda`` evaluated on them.

    Returns:
        CheckReport; the first failed condition carries a witness
    """
    report = CheckReport(title="nil2")
    n = d.n
    cn1 = None
    for b, _ in d.relations:
        for i in range(n):
            if any(d.cocycle.lam(b, unit_vector(n, i))):
                cn1 = (b, d.names[i])
                break
        if cn1:
            break
    report.add("nil2.cn1", cn1 is None, cn1)

    cn2 = None
    if cn1 is None:
        for c in d._normalized[2]:
            if any(c):
                cn2 = c
                break
    report.add("nil2.cn2", cn2 is None, cn2)

    cn3 = None
    for a in range(n):
        for b in range(a + 1, n):
            via_law = nil2_commutator(d.gen(a), d.gen(b))
            via_pairing = d.central_element(d.cocycle.lam(unit_vector(n, a), unit_vector(n, b)))
            if via_law != via_pairing:
                cn3 = (d.names[a], d.names[b], (via_law.v, via_law.c), (via_pairing.v, via_pairing.c))
                break
        if cn3:
            break
    report.add("nil2.cn3", cn3 is None, cn3)
    return report


# ---------------------------------------------------------------------------
# Homomorphisms


class Nil2Hom:
    """Homomorphism of nil2 data given on the source word generators."""

    def __init__(
        self,
        source: Nil2Datum,
        target: Nil2Datum,
        images: Sequence[Nil2Element],
        check: bool = True,
    ):
        if len(images) != source.nwords:
            raise ValueError(f"expected {source.nwords} generator images, got {len(images)}")
        for x in images:
            if x.owner is not target:
                raise ValueError("generator image outside the target datum")
        self.source = source
        self.target = target
        self.images: Tuple[Nil2Element, ...] = tuple(images)
        if check:
            self.check_report().raise_for_failure()

    @classmethod
    def identity(cls, d: Nil2Datum) -> "Nil2Hom":
        return cls(d, d, d.word_gens(), check=False)

    @classmethod
    def zero(cls, source: Nil2Datum, target: Nil2Datum) -> "Nil2Hom":
        return cls(source, target, [target.zero()] * source.nwords, check=False)

    @classmethod
    def from_lattice_images(cls, source: Nil2Datum, target: Nil2Datum, lattice: Sequence[Nil2Element],
                            central: Optional[Callable[[Vector], Nil2Element]] = None,
                            check: bool = True) -> "Nil2Hom":
        """Hom given on lattice generators, central generators by ``central`` or forced.

        When ``central`` is None, the source central group must be spanned by
        commutators; its generators are then sent to the matching commutators.
        """
        images = list(lattice)
        if central is None:
            central = _central_from_commutators(source, target, lattice)
        images += [central(source.central.gen(j)) for j in range(source.central.rank)]
        return cls(source, target, images, check=check)

    def check_report(self) -> CheckReport:
        report = CheckReport(title="nil2 homomorphism")
        for name, word in self.source.relators:
            value = self.eval_word(word)
            if not value.is_zero():
                report.add("nil2_hom.relator", False, f"{name} -> {value}")
                return report
        report.add("nil2_hom.relator", True)
        return report

    def eval_word(self, word: Syllables) -> Nil2Element:
        acc = self.target.zero()
        for g, k in word:
            if k:
                acc = acc + k * self.images[g]
        return acc

    def apply(self, x: Nil2Element) -> Nil2Element:
        acc = self.target.zero()
        for g, k in enumerate(self.source.word_coords(x)):
            if k:
                acc = acc + k * self.images[g]
        return acc

    def __call__(self, x: Nil2Element) -> Nil2Element:
        return self.apply(x)

    def compose(self, inner: "Nil2Hom") -> "Nil2Hom":
        """Return ``self o inner``."""
        if inner.target is not self.source:
            raise ValueError("composition of non-composable nil2 homomorphisms")
        return Nil2Hom(inner.source, self.target, [self.apply(x) for x in inner.images], check=False)

    def add(self, other: "Nil2Hom") -> "Nil2Hom":
        """Pointwise sum on generators (a homomorphism when the images commute)."""
        return Nil2Hom(self.source, self.target, [a + b for a, b in zip(self.images, other.images)])

    def equals(self, other: "Nil2Hom") -> bool:
        return self.mismatch(other) is None

    def mismatch(self, other: "Nil2Hom") -> Optional[str]:
        """Name of the first word generator where two homs differ."""
        names = self.source.word_names()
        for g, (a, b) in enumerate(zip(self.images, other.images)):
            if a != b:
                return f"{names[g]}: {a} != {b}"
        return None

    # -- linearization ------------------------------------------------------

    @shared_property
    def _linear(self):
        src, tgt = self.source, self.target
        p = src.nwords
        w_rows = [list(x.v) for x in self.images]
        stacked = w_rows + tgt.relation_lattice()
        lat_h, lat_u, lat_piv = echelon_form(stacked, tgt.n)
        mus = [row[:p] for row in lat_u[len(lat_piv):]]
        mus = [m for m in mus if any(m)]
        lifts = [src.from_word_coords(m) for m in mus]
        values = []
        for x in lifts:
            y = self.apply(x)
            values.append(list(y.c))
        comm_rows = _commutator_span(src)
        for c in comm_rows:
            y = self.apply(src.central_element(c))
            values.append(list(y.c))
        free = FgAbelianGroup.free(len(values))
        linear = FgabHom(free, tgt.central, values, check=False)
        return {
            "lattice": (lat_h, lat_u, lat_piv, p),
            "lifts": lifts,
            "comm": comm_rows,
            "map": linear,
        }

    def _assemble(self, coeffs: Sequence[int]) -> Nil2Element:
        lin = self._linear
        lifts, comm = lin["lifts"], lin["comm"]
        acc = self.source.zero()
        for t, x in zip(coeffs[:len(lifts)], lifts):
            if t:
                acc = acc + t * x
        z = self.source.central.combine(list(zip(coeffs[len(lifts):], comm)))
        return acc + self.source.central_element(z)

    def kernel_generators(self) -> List[Nil2Element]:
        """Elements generating the kernel as a subgroup."""
        lin = self._linear
        gens = [self._assemble(t) for t in lin["map"].kernel_generators()]
        lifts = lin["lifts"]
        for i in range(len(lifts)):
            for j in range(i + 1, len(lifts)):
                gens.append(self.source.commutator(lifts[i], lifts[j]))
        return [g for g in gens if not g.is_zero()]

    def kernel(self, names: Optional[Sequence[str]] = None) -> "Nil2Subgroup":
        return subgroup_datum(self.source, self.kernel_generators(), names)

    def preimage(self, y: Nil2Element) -> Optional[Nil2Element]:
        """Some ``x`` with ``self(x) = y``, or None."""
        lin = self._linear
        lat_h, lat_u, lat_piv, p = lin["lattice"]
        sol = solve_with_echelon(lat_h, lat_u, lat_piv, list(y.v))
        if sol is None:
            return None
        x0 = self.source.from_word_coords(sol[:p])
        delta = -self.apply(x0) + y
        if any(delta.v):
            raise ValidationError("lattice solve left a non-central defect", check="nil2_hom.preimage")
        coeffs = lin["map"].preimage(delta.c)
        if coeffs is None:
            return None
        return x0 + self._assemble(coeffs)

    def is_surjective(self) -> bool:
        src_ab = self.source.abelianization
        tgt_ab = self.target.abelianization
        induced = FgabHom.from_generator_images(
            src_ab.group, tgt_ab.group, [tgt_ab(x) for x in self.images]
        )
        return induced.is_surjective()

    def is_injective(self) -> bool:
        return not self.kernel_generators()

    def inverse(self) -> "Nil2Hom":
        """Inverse of an isomorphism.

        Raises:
            ValidationError: If the homomorphism is not bijective
        """
        images = []
        for g in range(self.target.nwords):
            x = self.preimage(self.target.word_gen(g))
            if x is None:
                raise ValidationError("not surjective", check="nil2_hom.inverse", witness=self.target.word_names()[g])
            images.append(x)
        inv = Nil2Hom(self.target, self.source, images, check=False)
        inv.check_report().raise_for_failure()
        back = inv.compose(self)
        problem = back.mismatch(Nil2Hom.identity(self.source))
        if problem is not None:
            raise ValidationError("not injective", check="nil2_hom.inverse", witness=problem)
        return inv

    def is_iso(self) -> bool:
        if not self.is_surjective():
            return False
        try:
            self.inverse()
        except ValidationError:
            return False
        return True

    def __repr__(self) -> str:
        return f"Nil2Hom({self.source.names} -> {self.target.names})"


def _commutator_span(d: Nil2Datum) -> Rows:
    """Hermite basis of the central coordinates spanned by generator commutators."""
    n = d.n
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            lam = d.cocycle.lam(unit_vector(n, a), unit_vector(n, b))
            if any(lam):
                rows.append(list(lam))
    rows += d.central.relation_rows()
    h, _, piv = echelon_form(rows, d.central.rank)
    return [h[t] for t in range(len(piv))]


def _central_from_commutators(source: Nil2Datum, target: Nil2Datum, lattice: Sequence[Nil2Element]):
    n = source.n
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rows = [list(source.cocycle.lam(unit_vector(n, a), unit_vector(n, b))) for a, b in pairs]
    rows += source.central.relation_rows()
    values = [target.commutator(lattice[a], lattice[b]) for a, b in pairs]

    def central(c: Vector) -> Nil2Element:
        sol = solve_left(rows, list(c), source.central.rank)
        if sol is None:
            raise ValidationError(
                "central generator is not a combination of commutators",
                check="nil2_hom.central",
                witness=c,
            )
        acc = target.zero()
        for k, val in zip(sol, values):
            if k:
                acc = acc + k * val
        return acc

    return central


@dataclass
class Nil2Subgroup:
    """A subgroup presented as its own datum with the inclusion."""

    datum: Nil2Datum
    inclusion: Nil2Hom

    def contains(self, x: Nil2Element) -> bool:
        return self.inclusion.preimage(x) is not None


def subgroup_datum(d: Nil2Datum, elements: Sequence[Nil2Element], names: Optional[Sequence[str]] = None) -> Nil2Subgroup:
    """The subgroup generated by ``elements`` as a datum of its own."""
    k = len(elements)
    gen_names = list(names) if names is not None and len(names) == k else [f"h{i}" for i in range(k)]
    free = Nil2Datum.free(gen_names)
    images = list(elements)
    for a in range(k):
        for b in range(a + 1, k):
            images.append(d.commutator(elements[a], elements[b]))
    cover = Nil2Hom(free, d, images, check=False)
    quotient = free.quotient_by(cover.kernel_generators())
    inclusion = Nil2Hom(quotient.datum, d, [cover(x) for x in quotient.section], check=False)
    return Nil2Subgroup(quotient.datum, inclusion)


# ---------------------------------------------------------------------------
# Central families (homomorphisms from abelian groups into the centre)


class CentralHom:
    """Homomorphism from an abelian group into the centre of a nil2 datum."""

    def __init__(self, source: FgAbelianGroup, target: Nil2Datum, images: Sequence[Nil2Element], check: bool = True):
        if len(images) != source.rank:
            raise ValueError(f"expected {source.rank} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images: Tuple[Nil2Element, ...] = tuple(images)
        if check:
            self.check_report().raise_for_failure()

    @classmethod
    def zero(cls, source: FgAbelianGroup, target: Nil2Datum) -> "CentralHom":
        return cls(source, target, [target.zero()] * source.rank, check=False)

    def check_report(self) -> CheckReport:
        report = CheckReport(title="central homomorphism")
        bad = None
        for i, (x, d) in enumerate(zip(self.images, self.source.invariants)):
            if d and not self.target.scale(d, x).is_zero():
                bad = f"generator {i} of order {d} -> {x}"
                break
        report.add("central_hom.torsion", bad is None, bad)
        bad = None
        for i, x in enumerate(self.images):
            if not self.target.is_central(x):
                bad = f"image of generator {i} is not central: {x}"
                break
        report.add("central_hom.central", bad is None, bad)
        return report

    def apply(self, a: Sequence[int]) -> Nil2Element:
        acc = self.target.zero()
        for k, x in zip(a, self.images):
            if k:
                acc = acc + k * x
        return acc

    def __call__(self, a: Sequence[int]) -> Nil2Element:
        return self.apply(a)

    def compose_hom(self, inner: FgabHom) -> "CentralHom":
        """``self o inner``."""
        return CentralHom(inner.source, self.target, [self.apply(r) for r in inner.rows], check=False)

    def then(self, f: Nil2Hom) -> "CentralHom":
        """``f o self``."""
        return CentralHom(self.source, f.target, [f(x) for x in self.images], check=False)

    def kernel_vectors(self) -> List[Vector]:
        return kernel_of_central_family(self.target, self.images, self.source)

    def kernel(self) -> Tuple[FgAbelianGroup, FgabHom]:
        return subgroup(self.source, self.kernel_vectors())

    def image_group(self) -> Tuple[FgAbelianGroup, FgabHom]:
        """``source / ker`` with the projection from the source."""
        return self.source.quotient(self.kernel_vectors())

    def equals(self, other: "CentralHom") -> bool:
        return self.images == other.images


def kernel_of_central_family(d: Nil2Datum, images: Sequence[Nil2Element], source: Optional[FgAbelianGroup] = None) -> List[Vector]:
    """Generators of ``{a : sum a_i images_i = 0}`` for pairwise commuting images.

    Args:
        d: Target datum
        images: Central elements
        source: Group whose canonical coordinates ``a`` lives in (free if None)

    Returns:
        Kernel generators in canonical coordinates of ``source``
    """
    r = len(images)
    if source is None:
        source = FgAbelianGroup.free(r)
    stacked = [list(x.v) for x in images] + d.relation_lattice()
    mus = [row[:r] for row in left_kernel(stacked, d.n)]
    values = []
    for mu in mus:
        acc = d.zero()
        for k, x in zip(mu, images):
            if k:
                acc = acc + k * x
        values.append(list(acc.c))
    if not mus:
        return []
    coeffs = left_kernel(values + d.central.relation_rows(), d.central.rank)
    out = []
    for t in coeffs:
        a = vec_mat(t[:len(mus)], mus, r)
        a = source.reduce(a)
        if any(a):
            out.append(a)
    return out


# ---------------------------------------------------------------------------
# Quadratic maps


class QuadraticMap:
    """Quadratic map from a nil2 datum to an abelian group.

    Given by its values on the word generators and the cross-effect
    ``cross[g][h] = (g | h)`` on pairs of word generators; the value on an
    ordered word ``sum n_g g`` is
    ``sum n_g f(g) + C(n_g, 2) (g|g) + sum_{g<h} n_g n_h (g|h)``.
    """

    def __init__(
        self,
        source: Nil2Datum,
        target: FgAbelianGroup,
        values: Sequence[Sequence[int]],
        cross: Sequence[Sequence[Sequence[int]]],
    ):
        p = source.nwords
        if len(values) != p or len(cross) != p or any(len(row) != p for row in cross):
            raise ValueError(f"quadratic map data must cover {p} word generators")
        self.source = source
        self.target = target
        self.values: Tuple[Vector, ...] = tuple(target.reduce(x) for x in values)
        self.cross: Tuple[Tuple[Vector, ...], ...] = tuple(
            tuple(target.reduce(x) for x in row) for row in cross
        )
        self._terms = [
            (g, h, self.cross[g][h]) for g in range(p) for h in range(p) if any(self.cross[g][h])
        ]

    @classmethod
    def zero(cls, source: Nil2Datum, target: FgAbelianGroup) -> "QuadraticMap":
        p = source.nwords
        z = target.zero()
        return cls(source, target, [z] * p, [[z] * p for _ in range(p)])

    @classmethod
    def from_function(cls, source: Nil2Datum, target: FgAbelianGroup,
                      fn: Callable[[Nil2Element], Sequence[int]],
                      cross_fn: Callable[[Nil2Element, Nil2Element], Sequence[int]]) -> "QuadraticMap":
        gens = source.word_gens()
        return cls(source, target, [fn(g) for g in gens], [[cross_fn(g, h) for h in gens] for g in gens])

    def cross_vectors(self, m: Sequence[int], k: Sequence[int]) -> Vector:
        return self.target.combine([(m[g] * k[h], b) for g, h, b in self._terms if m[g] and k[h]])

    def eval_coords(self, m: Sequence[int]) -> Vector:
        terms = [(k, self.values[g]) for g, k in enumerate(m) if k]
        for g, h, b in self._terms:
            if g == h and m[g]:
                terms.append((binom2(m[g]), b))
            elif g < h and m[g] and m[h]:
                terms.append((m[g] * m[h], b))
        return self.target.combine(terms)

    def __call__(self, x: Nil2Element) -> Vector:
        return self.eval_coords(self.source.word_coords(x))

    def cross_effect(self, x: Nil2Element, y: Nil2Element) -> Vector:
        """``(x | y) = f(x + y) - f(x) - f(y)``."""
        return self.cross_vectors(self.source.word_coords(x), self.source.word_coords(y))

    def eval_word(self, word: Syllables) -> Vector:
        p = self.source.nwords
        terms = []
        seen: List[Tuple[int, int]] = []
        for g, k in word:
            if not k:
                continue
            terms.append((k, self.values[g]))
            terms.append((binom2(k), self.cross[g][g]))
            for h, l in seen:
                terms.append((l * k, self.cross[h][g]))
            seen.append((g, k))
        return self.target.combine(terms)

    def descent_report(self) -> CheckReport:
        """Check that the map is well defined on the presented group.

        The map must vanish on every relator and its cross-effect must vanish
        against the abelianized relators on either side.
        """
        report = CheckReport(title="quadratic map descent")
        d = self.source
        for name, word in d.relators:
            value = self.eval_word(word)
            if any(value):
                report.add("quad.relator", False, f"{name} -> {value}")
                return report
            ab = d.abelianized(word)
            for g in range(d.nwords):
                e = unit_vector(d.nwords, g)
                left = self.cross_vectors(ab, e)
                right = self.cross_vectors(e, ab)
                if any(left) or any(right):
                    report.add("quad.cross", False, f"({name} | {d.word_names()[g]})")
                    return report
        report.add("quad.relator", True)
        report.add("quad.cross", True)
        return report

    def descends(self) -> bool:
        return self.descent_report().ok

    def then(self, h: FgabHom) -> "QuadraticMap":
        """``h o self``."""
        return QuadraticMap(
            self.source, h.target,
            [h(x) for x in self.values],
            [[h(x) for x in row] for row in self.cross],
        )

    def precompose(self, f: Nil2Hom) -> "QuadraticMap":
        """``self o f``."""
        return QuadraticMap(
            f.source, self.target,
            [self(x) for x in f.images],
            [[self.cross_effect(x, y) for y in f.images] for x in f.images],
        )

    def pushforward(self, quotient: Nil2Quotient) -> "QuadraticMap":
        """The induced map on a quotient, assuming this map is constant on fibres."""
        sec = quotient.section
        return QuadraticMap(
            quotient.datum, self.target,
            [self(x) for x in sec],
            [[self.cross_effect(x, y) for y in sec] for x in sec],
        )

    def __add__(self, other: "QuadraticMap") -> "QuadraticMap":
        t = self.target
        return QuadraticMap(
            self.source, t,
            [t.add(a, b) for a, b in zip(self.values, other.values)],
            [[t.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.cross, other.cross)],
        )

    def equals(self, other: "QuadraticMap") -> bool:
        return self.values == other.values and self.cross == other.cross


# ---------------------------------------------------------------------------
# Free nil2 groups and normal forms


@dataclass(frozen=True)
class Nil2NormalForm:
    """Collected word ``n_1 x_1 + ... + n_p x_p + m_1 [y_1, z_1] + ...``."""

    linear: Tuple[Tuple[str, int], ...]
    commutators: Tuple[Tuple[Tuple[str, str], int], ...]

    def __str__(self) -> str:
        parts = [_term(k, x) for x, k in self.linear]
        parts += [_term(m, f"[{y},{z}]") for (y, z), m in self.commutators]
        return "+".join(parts).replace("+-", "-") if parts else "0"


@dataclass(frozen=True)
class FreeNil2Group:
    """Free nilpotence-class-two group on an ordered generator list."""

    names: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"generator names must be distinct: {self.names}")

    @shared_property
    def datum(self) -> Nil2Datum:
        return Nil2Datum.free(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"unknown generator '{name}'")

    def element(self, word: Sequence[Union[str, Tuple[str, int]]]) -> Nil2Element:
        d = self.datum
        acc = d.zero()
        for letter in word:
            name, k = _parse_letter(letter)
            acc = acc + k * d.gen(self.index(name))
        return acc

    def normal_form(self, x: Nil2Element) -> Nil2NormalForm:
        d = self.datum
        pairs = sorted(d.pair_index.items(), key=lambda kv: kv[1])
        return Nil2NormalForm(
            tuple((self.names[i], k) for i, k in enumerate(x.v) if k),
            tuple(((self.names[a], self.names[b]), x.c[idx]) for (a, b), idx in pairs if x.c[idx]),
        )


def _parse_letter(letter: Union[str, Tuple[str, int]]) -> Tuple[str, int]:
    if isinstance(letter, tuple):
        return letter[0], int(letter[1])
    if letter.startswith("-"):
        return letter[1:], -1
    if letter.startswith("+"):
        return letter[1:], 1
    return letter, 1


def nf_reduce(word: Sequence[Union[str, Tuple[str, int]]], g: FreeNil2Group) -> Nil2NormalForm:
    """Collect a word in the free nil2 group into normal form.

    Args:
        word: Letters ``"x"``, ``"-x"`` or pairs ``("x", k)``
        g: The free group

    Returns:
        The normal form

    Raises:
        ValueError: If a letter is not a generator of ``g``
    """
    return g.normal_form(g.element(word))


def quad_extend(f0: Sequence[Sequence[int]], phi: Sequence[Sequence[Sequence[int]]],
                g: FreeNil2Group, target: FgAbelianGroup) -> QuadraticMap:
    """The unique quadratic map on a free nil2 group with given values and cross-effect.

    Args:
        f0: Values on the generators
        phi: Bilinear form on generator pairs, ``phi[u][v] = (u | v)``
        g: Free group
        target: Codomain

    Returns:
        QuadraticMap on ``g.datum``; commutator generators take the value
        ``phi(a, b) - phi(b, a)`` and have vanishing cross-effects
    """
    d = g.datum
    n = d.n
    p = d.nwords
    z = target.zero()
    values = [target.reduce(x) for x in f0]
    pairs = sorted(d.pair_index.items(), key=lambda kv: kv[1])
    for (a, b), _ in pairs:
        values.append(target.sub(phi[a][b], phi[b][a]))
    cross = [[z] * p for _ in range(p)]
    for a in range(n):
        for b in range(n):
            cross[a][b] = target.reduce(phi[a][b])
    return QuadraticMap(d, target, values, cross)


def quad_descends(f: QuadraticMap, relators: Sequence[Nil2Element]) -> Tuple[bool, Optional[str], Optional[QuadraticMap]]:
    """Whether ``f`` vanishes on the normal closure of ``relators``.

    Returns:
        ``(ok, witness, induced)``; ``induced`` is the map on the quotient
        when ``ok``
    """
    report = relator_descent_report(f, relators)
    if not report.ok:
        return False, report.first_failure().witness, None
    quotient = f.source.quotient_by(list(relators))
    return True, None, f.pushforward(quotient)


def relator_descent_report(f: QuadraticMap, relators: Sequence[Nil2Element]) -> CheckReport:
    """Check that ``f`` and its cross-effect vanish on ``relators``.

    This is what makes ``f`` constant on the cosets of their normal closure.
    """
    report = CheckReport(title="quadratic map descent")
    d = f.source
    for idx, r in enumerate(relators):
        value = f(r)
        if any(value):
            report.add("quad.relator", False, f"relator {idx}: {d.format(r)} -> {value}")
            return report
        m = d.word_coords(r)
        for g in range(d.nwords):
            e = unit_vector(d.nwords, g)
            if any(f.cross_vectors(m, e)) or any(f.cross_vectors(e, m)):
                report.add("quad.cross", False, f"relator {idx}: cross-effect with {d.word_names()[g]}")
                return report
    report.add("quad.relator", True)
    report.add("quad.cross", True)
    return report


# ---------------------------------------------------------------------------
# Presentations


class Nil2Presentation:
    """Builder for nil2 groups given by generators, commutators and relators.

    The starting group is ``Z^k x_beta (Z + free)`` where prescribed
    commutators ``[x_a, x_b]`` (``a < b``) live in the abelian group ``Z``
    and every pair without a prescription gets a fresh free central
    generator. Ordered words in the generators have zero central part.
    """

    def __init__(
        self,
        names: Sequence[str],
        central: FgAbelianGroup,
        commutators: Optional[Dict[Tuple[int, int], Sequence[int]]] = None,
    ):
        self.names = list(names)
        k = len(self.names)
        commutators = dict(commutators or {})
        free_pairs = [(a, b) for a in range(k) for b in range(a + 1, k) if (a, b) not in commutators]
        self.free_pairs = {p: i for i, p in enumerate(free_pairs)}
        summed = direct_sum([central, FgAbelianGroup.free(len(free_pairs))])
        self.summed = summed
        self.central = central
        self.embed_central = summed.injections[0]
        zero = summed.group.zero()
        beta = [[zero] * k for _ in range(k)]
        for a in range(k):
            for b in range(a + 1, k):
                if (a, b) in commutators:
                    lam = self.embed_central(central.reduce(commutators[(a, b)]))
                else:
                    lam = summed.injections[1](unit_vector(len(free_pairs), self.free_pairs[(a, b)]))
                beta[b][a] = summed.group.neg(lam)
        self.datum = Nil2Datum(self.names, summed.group, beta)

    def gen(self, i: int) -> Nil2Element:
        return self.datum.gen(i)

    def central_element(self, z: Sequence[int]) -> Nil2Element:
        """Element of the prescribed central group ``Z``."""
        return self.datum.central_element(self.embed_central(z))

    def finish(self, relators: Sequence[Nil2Element], names: Optional[Sequence[str]] = None) -> Nil2Quotient:
        logger.debug(f"presentation: {len(self.names)} generators, {len(relators)} relators")
        return self.datum.quotient_by(list(relators), names)

    def central_part(self, c: Sequence[int]) -> Vector:
        """Component in ``Z`` of a central coordinate vector of the datum."""
        return self.summed.unpack(c)[0]


# ---------------------------------------------------------------------------
# Operation-level helpers


def nil2_mul(x: Nil2Element, y: Nil2Element) -> Nil2Element:
    """Product ``x + y`` of two elements of the same datum.

    Raises:
        ValueError: If the elements belong to different data
    """
    return x.owner.add(x, y)


def nil2_inv(x: Nil2Element) -> Nil2Element:
    return x.owner.neg(x)


def nil2_commutator(x: Nil2Element, y: Nil2Element) -> Nil2Element:
    """``[x, y] = -x - y + x + y``."""
    return x.owner.commutator(x, y)


def nil2_hom(images: Sequence[Nil2Element], source: Nil2Datum, target: Nil2Datum) -> Nil2Hom:
    """Homomorphism given on word generators, validated on every relator.

    Raises:
        ValidationError: If some relator of ``source`` is not sent to zero
    """
    return Nil2Hom(source, target, images, check=True)
