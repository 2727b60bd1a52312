"""Exact integer linear algebra and finitely generated abelian groups.

Vectors are integer row vectors and a homomorphism ``Z^m -> Z^n`` is an
``m x n`` matrix acting on the right, ``x -> x . M``. All arithmetic is on
Python integers, so nothing overflows.

A ``FgAbelianGroup`` is presented by generators and relation rows and keeps
the Smith normal form data that identifies it with
``Z/d_1 + ... + Z/d_k + Z^r``. Elements are tuples of canonical coordinates
(torsion coordinates reduced into ``[0, d_i)``).
"""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import Matrix

from .utils import ValidationError, setup_logger


logger = setup_logger(__name__)

Vector = Tuple[int, ...]
Rows = List[List[int]]


# ---------------------------------------------------------------------------
# Plain list-of-rows helpers


def identity_rows(n: int) -> Rows:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_rows(r: int, c: int) -> Rows:
    return [[0] * c for _ in range(r)]


def vec_mat(x: Sequence[int], m: Sequence[Sequence[int]], ncols: int) -> List[int]:
    """Return the row vector ``x . m`` of length ``ncols``."""
    out = [0] * ncols
    for coeff, row in zip(x, m):
        if coeff:
            for j in range(ncols):
                if row[j]:
                    out[j] += coeff * row[j]
    return out


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], ncols: int) -> Rows:
    return [vec_mat(row, b, ncols) for row in a]


def transpose_rows(m: Sequence[Sequence[int]], ncols: int) -> Rows:
    return [[row[j] for row in m] for j in range(ncols)]


def add_vec(x: Sequence[int], y: Sequence[int]) -> List[int]:
    return [a + b for a, b in zip(x, y)]


def scale_vec(k: int, x: Sequence[int]) -> List[int]:
    return [k * a for a in x]


def unit_vector(n: int, i: int, value: int = 1) -> List[int]:
    v = [0] * n
    v[i] = value
    return v


# ---------------------------------------------------------------------------
# IntMatrix


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix.

    Attributes:
        rows: Number of rows
        cols: Number of columns
        entries: Row-major entries, ``rows * cols`` of them
    """

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"matrix shape must be non-negative, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} "
                f"matrix, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError(f"ragged matrix: row of length {len(r)} in a {cols}-column matrix")
        return cls(len(rows), cols, tuple(int(v) for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows(identity_rows(n), n)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls.from_rows([unit_vector(n, i, v) for i, v in enumerate(values)], n)

    @classmethod
    def from_sympy(cls, m: Matrix) -> "IntMatrix":
        return cls.from_rows([[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)], m.cols)

    def to_sympy(self) -> Matrix:
        return Matrix(self.rows, self.cols, list(self.entries))

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def to_rows(self) -> Rows:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(transpose_rows(self.to_rows(), self.cols), self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return IntMatrix.from_rows(mat_mul(self.to_rows(), other.to_rows(), other.cols), other.cols)

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal_entries(self) -> List[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return int(self.to_sympy().det()) if self.rows else 1


# ---------------------------------------------------------------------------
# Echelon form and Smith normal form


def echelon_form(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[Rows, Rows, List[int]]:
    """Row-style Hermite normal form.

    Args:
        rows: Input rows
        ncols: Number of columns

    Returns:
        ``(h, u, pivots)`` with ``u . rows = h``, ``u`` unimodular, ``h`` in
        echelon form with positive pivots and the entries above each pivot
        reduced into ``[0, pivot)``. Rows of ``h`` past ``len(pivots)`` are zero.
    """
    h = [list(r) for r in rows]
    m = len(h)
    u = identity_rows(m)
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            candidates = [i for i in range(r, m) if h[i][c] != 0]
            if not candidates:
                break
            best = min(candidates, key=lambda i: abs(h[i][c]))
            if best != r:
                h[r], h[best] = h[best], h[r]
                u[r], u[best] = u[best], u[r]
            p = h[r][c]
            cleared = True
            for i in range(r + 1, m):
                if h[i][c]:
                    q = h[i][c] // p
                    h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if h[i][c]:
                        cleared = False
            if cleared:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-a for a in h[r]]
            u[r] = [-a for a in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return h, u, pivots


def rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    return len(echelon_form(rows, ncols)[2])


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Rows:
    """Basis of ``{k : k . rows = 0}``."""
    _, u, pivots = echelon_form(rows, ncols)
    return u[len(pivots):]


def solve_left(rows: Sequence[Sequence[int]], y: Sequence[int], ncols: int) -> Optional[List[int]]:
    """Find an integer ``x`` with ``x . rows = y``.

    Returns:
        A solution, or None when ``y`` is not in the row lattice
    """
    h, u, pivots = echelon_form(rows, ncols)
    return solve_with_echelon(h, u, pivots, y)


def solve_with_echelon(h: Rows, u: Rows, pivots: List[int], y: Sequence[int]) -> Optional[List[int]]:
    residual = list(y)
    coeffs = []
    for t, c in enumerate(pivots):
        for j in range(pivots[t - 1] + 1 if t else 0, c):
            if residual[j]:
                return None
        q, rem = divmod(residual[c], h[t][c])
        if rem:
            return None
        coeffs.append(q)
        if q:
            residual = [a - q * b for a, b in zip(residual, h[t])]
    if any(residual):
        return None
    return vec_mat(coeffs, u[:len(pivots)], len(u))


@dataclass
class SmithForm:
    """Smith normal form ``u . a . v = d`` together with ``v^-1``."""

    u: Rows
    d: Rows
    v: Rows
    v_inv: Rows

    def diagonal(self) -> List[int]:
        return [self.d[i][i] for i in range(min(len(self.d), len(self.v)))]


def smith_rows(a: Sequence[Sequence[int]], ncols: int) -> SmithForm:
    """Smith normal form with the smallest-magnitude pivot strategy.

    Args:
        a: Input rows
        ncols: Number of columns

    Returns:
        SmithForm with ``u . a . v = d``, ``d`` diagonal, non-negative and
        with each diagonal entry dividing the next
    """
    m, n = len(a), ncols
    d = [list(r) for r in a]
    u = identity_rows(m)
    v = identity_rows(n)
    v_inv = identity_rows(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_row(target, source, q):
        # row_target += q * row_source
        d[target] = [x + q * y for x, y in zip(d[target], d[source])]
        u[target] = [x + q * y for x, y in zip(u[target], u[source])]

    def add_col(target, source, q):
        # col_target += q * col_source
        for row in d:
            row[target] += q * row[source]
        for row in v:
            row[target] += q * row[source]
        v_inv[source] = [x - q * y for x, y in zip(v_inv[source], v_inv[target])]

    for t in range(min(m, n)):
        entries = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        if i0 != t:
            swap_rows(t, i0)
        if j0 != t:
            swap_cols(t, j0)
        while True:
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    if d[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    if d[t][j]:
                        clean = False
            if not clean:
                line = [(abs(d[i][t]), i, t) for i in range(t, m) if d[i][t]]
                line += [(abs(d[t][j]), t, j) for j in range(t + 1, n) if d[t][j]]
                _, i1, j1 = min(line)
                if i1 != t:
                    swap_rows(t, i1)
                if j1 != t:
                    swap_cols(t, j1)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return SmithForm(u, d, v, v_inv)


def smith_normal_form(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form of an integer matrix.

    Args:
        m: Input matrix

    Returns:
        ``(u, d, v)`` with ``u @ m @ v == d``, ``u`` and ``v`` unimodular and
        ``d`` diagonal with the divisibility chain
    """
    form = smith_rows(m.to_rows(), m.cols)
    return (
        IntMatrix.from_rows(form.u, m.rows),
        IntMatrix.from_rows(form.d, m.cols),
        IntMatrix.from_rows(form.v, m.cols),
    )


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


class FgAbelianGroup:
    """Finitely generated abelian group ``Z^ngens / rowspan(relations)``.

    Attributes:
        ngens: Number of presentation generators
        relations: Relation rows
        invariants: Invariant factors without units; 0 encodes a free factor
        to_canonical: ``ngens x rank`` matrix from presentation to canonical coordinates
        from_canonical: ``rank x ngens`` matrix lifting canonical generators
        labels: Optional names of the presentation generators
    """

    def __init__(
        self,
        ngens: int,
        relations: Sequence[Sequence[int]] = (),
        labels: Optional[Sequence[str]] = None,
    ):
        self.ngens = ngens
        self.relations: Tuple[Vector, ...] = tuple(tuple(int(x) for x in r) for r in relations)
        for r in self.relations:
            if len(r) != ngens:
                raise ValueError(f"relation {r} does not have {ngens} entries")
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != ngens:
            raise ValueError(f"expected {ngens} labels, got {len(self.labels)}")

        form = smith_rows([list(r) for r in self.relations], ngens)
        diag = form.diagonal() + [0] * (ngens - len(form.diagonal()))
        kept = [i for i in range(ngens) if diag[i] != 1]
        self.invariants: Tuple[int, ...] = tuple(diag[i] for i in kept)
        self.to_canonical: Rows = [[form.v[g][i] for i in kept] for g in range(ngens)]
        self.from_canonical: Rows = [list(form.v_inv[i]) for i in kept]

    # -- constructors -----------------------------------------------------

    @classmethod
    def diagonal(cls, invariants: Sequence[int], labels: Optional[Sequence[str]] = None) -> "FgAbelianGroup":
        n = len(invariants)
        rels = [unit_vector(n, i, d) for i, d in enumerate(invariants) if d != 0]
        return cls(n, rels, labels)

    @classmethod
    def free(cls, n: int, labels: Optional[Sequence[str]] = None) -> "FgAbelianGroup":
        return cls(n, (), labels)

    @classmethod
    def cyclic(cls, d: int) -> "FgAbelianGroup":
        return cls.diagonal([d])

    @classmethod
    def trivial(cls) -> "FgAbelianGroup":
        return cls(0)

    # -- structure ----------------------------------------------------------

    @property
    def rank(self) -> int:
        """Number of canonical coordinates."""
        return len(self.invariants)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariants if d != 0)

    def is_trivial(self) -> bool:
        return self.rank == 0

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if not self.is_finite():
            return None
        total = 1
        for d in self.invariants:
            total *= d
        return total

    def exponent(self) -> Optional[int]:
        if not self.is_finite():
            return None
        return self.invariants[-1] if self.invariants else 1

    def isomorphic(self, other: "FgAbelianGroup") -> bool:
        return self.invariants == other.invariants

    def __repr__(self) -> str:
        return f"FgAbelianGroup({self})"

    def __str__(self) -> str:
        if not self.invariants:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariants)

    # -- elements -----------------------------------------------------------

    def reduce(self, coords: Sequence[int]) -> Vector:
        return tuple(c % d if d else c for c, d in zip(coords, self.invariants))

    def zero(self) -> Vector:
        return (0,) * self.rank

    def gen(self, i: int) -> Vector:
        return self.reduce(unit_vector(self.rank, i))

    def gens(self) -> List[Vector]:
        return [self.gen(i) for i in range(self.rank)]

    def from_gens(self, x: Sequence[int]) -> Vector:
        """Canonical coordinates of a presentation-level vector."""
        if len(x) != self.ngens:
            raise ValueError(f"expected {self.ngens} generator coefficients, got {len(x)}")
        return self.reduce(vec_mat(x, self.to_canonical, self.rank))

    def to_gens(self, c: Sequence[int]) -> List[int]:
        """A presentation-level lift of canonical coordinates."""
        return vec_mat(c, self.from_canonical, self.ngens)

    def presentation_gen(self, g: int) -> Vector:
        return self.from_gens(unit_vector(self.ngens, g))

    def add(self, *xs: Sequence[int]) -> Vector:
        total = [0] * self.rank
        for x in xs:
            total = add_vec(total, x)
        return self.reduce(total)

    def neg(self, x: Sequence[int]) -> Vector:
        return self.reduce([-a for a in x])

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return self.reduce([a - b for a, b in zip(x, y)])

    def scale(self, k: int, x: Sequence[int]) -> Vector:
        return self.reduce([k * a for a in x])

    def combine(self, terms: Sequence[Tuple[int, Sequence[int]]]) -> Vector:
        total = [0] * self.rank
        for k, x in terms:
            if k:
                total = [a + k * b for a, b in zip(total, x)]
        return self.reduce(total)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.reduce(x))

    def element(self, coords: Sequence[int]) -> "FgabElement":
        return FgabElement(self, self.reduce(coords))

    def elements(self) -> Iterator[Vector]:
        """Iterate over all elements of a finite group in lexicographic order."""
        if not self.is_finite():
            raise ValueError(f"cannot enumerate the infinite group {self}")
        for coords in cartesian(*[range(d) for d in self.invariants]):
            yield tuple(coords)

    def element_order(self, x: Sequence[int]) -> int:
        """Order of an element, 0 for infinite order."""
        x = self.reduce(x)
        result = 1
        for c, d in zip(x, self.invariants):
            if c == 0:
                continue
            if d == 0:
                return 0
            k = d // _gcd(c, d)
            result = result * k // _gcd(result, k)
        return result

    def relation_rows(self) -> Rows:
        """Canonical relations ``d_i e_i`` for the torsion coordinates."""
        return [unit_vector(self.rank, i, d) for i, d in enumerate(self.invariants) if d]

    # -- derived groups -----------------------------------------------------

    def quotient(self, elems: Sequence[Sequence[int]]) -> Tuple["FgAbelianGroup", "FgabHom"]:
        """Quotient by the subgroup generated by ``elems``.

        Returns:
            ``(Q, projection)``
        """
        q = FgAbelianGroup(self.rank, self.relation_rows() + [list(e) for e in elems])
        proj = FgabHom(self, q, [q.from_gens(unit_vector(self.rank, i)) for i in range(self.rank)])
        return q, proj

    def direct_sum_with(self, *others: "FgAbelianGroup") -> "DirectSum":
        return direct_sum([self, *others])


@dataclass(frozen=True)
class FgabElement:
    """Element of a FgAbelianGroup in canonical coordinates."""

    owner: FgAbelianGroup
    coords: Vector

    def __add__(self, other: "FgabElement") -> "FgabElement":
        self._check(other)
        return FgabElement(self.owner, self.owner.add(self.coords, other.coords))

    def __sub__(self, other: "FgabElement") -> "FgabElement":
        self._check(other)
        return FgabElement(self.owner, self.owner.sub(self.coords, other.coords))

    def __neg__(self) -> "FgabElement":
        return FgabElement(self.owner, self.owner.neg(self.coords))

    def __rmul__(self, k: int) -> "FgabElement":
        return FgabElement(self.owner, self.owner.scale(k, self.coords))

    def __eq__(self, other) -> bool:
        return isinstance(other, FgabElement) and other.owner is self.owner and other.coords == self.coords

    def __hash__(self) -> int:
        return hash((id(self.owner), self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "FgabElement") -> None:
        if other.owner is not self.owner:
            raise ValueError("elements belong to different groups")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------------------
# Homomorphisms


class FgabHom:
    """Homomorphism of finitely generated abelian groups.

    ``rows[i]`` is the image of the i-th canonical generator of ``source``.
    """

    def __init__(
        self,
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        rows: Sequence[Sequence[int]],
        check: bool = True,
    ):
        if len(rows) != source.rank:
            raise ValueError(f"expected {source.rank} generator images, got {len(rows)}")
        self.source = source
        self.target = target
        self.rows: Tuple[Vector, ...] = tuple(target.reduce(r) for r in rows)
        if check:
            for i, d in enumerate(source.invariants):
                if d and not target.is_zero(target.scale(d, self.rows[i])):
                    raise ValidationError(
                        f"image of generator {i} of order {d} does not have order dividing {d}",
                        check="hom.torsion",
                        witness=i,
                    )

    @classmethod
    def from_generator_images(
        cls,
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        images: Sequence[Sequence[int]],
    ) -> "FgabHom":
        """Build a homomorphism from images of the presentation generators.

        Raises:
            ValidationError: If a relation of ``source`` is not respected
        """
        if len(images) != source.ngens:
            raise ValueError(f"expected {source.ngens} images, got {len(images)}")
        for r in source.relations:
            value = target.combine(list(zip(r, images)))
            if not target.is_zero(value):
                raise ValidationError(
                    f"relation {r} maps to {value} != 0",
                    check="hom.relation",
                    witness=r,
                )
        rows = [target.combine(list(zip(lift, images))) for lift in source.from_canonical]
        return cls(source, target, rows, check=False)

    @classmethod
    def from_function(
        cls,
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        fn: Callable[[Vector], Sequence[int]],
    ) -> "FgabHom":
        """Build a homomorphism from its values on canonical generators."""
        return cls(source, target, [fn(source.gen(i)) for i in range(source.rank)])

    @classmethod
    def identity(cls, group: FgAbelianGroup) -> "FgabHom":
        return cls(group, group, [group.gen(i) for i in range(group.rank)], check=False)

    @classmethod
    def zero(cls, source: FgAbelianGroup, target: FgAbelianGroup) -> "FgabHom":
        return cls(source, target, [target.zero()] * source.rank, check=False)

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.apply(x)

    def apply(self, x: Sequence[int]) -> Vector:
        return self.target.reduce(vec_mat(x, self.rows, self.target.rank))

    def compose(self, inner: "FgabHom") -> "FgabHom":
        """Return ``self o inner``."""
        if inner.target is not self.source and not inner.target.isomorphic(self.source):
            raise ValueError("composition of non-composable homomorphisms")
        return FgabHom(inner.source, self.target, [self.apply(r) for r in inner.rows], check=False)

    def __add__(self, other: "FgabHom") -> "FgabHom":
        return FgabHom(
            self.source, self.target,
            [self.target.add(a, b) for a, b in zip(self.rows, other.rows)], check=False,
        )

    def __sub__(self, other: "FgabHom") -> "FgabHom":
        return FgabHom(
            self.source, self.target,
            [self.target.sub(a, b) for a, b in zip(self.rows, other.rows)], check=False,
        )

    def __neg__(self) -> "FgabHom":
        return FgabHom(self.source, self.target, [self.target.neg(a) for a in self.rows], check=False)

    def scaled(self, k: int) -> "FgabHom":
        return FgabHom(self.source, self.target, [self.target.scale(k, a) for a in self.rows], check=False)

    def equals(self, other: "FgabHom") -> bool:
        return self.rows == other.rows

    def is_zero(self) -> bool:
        return all(not any(r) for r in self.rows)

    def _stacked(self) -> Rows:
        return [list(r) for r in self.rows] + self.target.relation_rows()

    def preimage(self, y: Sequence[int]) -> Optional[Vector]:
        """Some ``x`` with ``self(x) = y``, or None."""
        sol = solve_left(self._stacked(), list(self.target.reduce(y)), self.target.rank)
        if sol is None:
            return None
        return self.source.reduce(sol[:self.source.rank])

    def kernel_generators(self) -> List[Vector]:
        """Generators of the kernel, in source canonical coordinates."""
        basis = left_kernel(self._stacked(), self.target.rank)
        gens = [self.source.reduce(row[:self.source.rank]) for row in basis]
        return [g for g in gens if any(g)]

    def kernel(self) -> Tuple[FgAbelianGroup, "FgabHom"]:
        """Kernel with its inclusion."""
        return subgroup(self.source, self.kernel_generators())

    def image(self) -> Tuple[FgAbelianGroup, "FgabHom"]:
        return subgroup(self.target, [list(r) for r in self.rows])

    def cokernel(self) -> Tuple[FgAbelianGroup, "FgabHom"]:
        return self.target.quotient([list(r) for r in self.rows])

    def is_injective(self) -> bool:
        return self.kernel()[0].is_trivial()

    def is_surjective(self) -> bool:
        return self.cokernel()[0].is_trivial()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "FgabHom":
        """Inverse of an isomorphism.

        Raises:
            ValidationError: If the homomorphism is not bijective
        """
        if not self.is_injective():
            raise ValidationError("homomorphism is not injective", check="hom.inverse")
        rows = []
        for j in range(self.target.rank):
            x = self.preimage(self.target.gen(j))
            if x is None:
                raise ValidationError("homomorphism is not surjective", check="hom.inverse", witness=j)
            rows.append(x)
        return FgabHom(self.target, self.source, rows, check=False)

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_rows([list(r) for r in self.rows], self.target.rank)

    def __repr__(self) -> str:
        return f"FgabHom({self.source} -> {self.target}, {list(self.rows)})"


def fgab_from_presentation(ngens: int, relations: Union[IntMatrix, Sequence[Sequence[int]]]) -> FgAbelianGroup:
    """``Z^ngens`` modulo the row span of ``relations``."""
    if isinstance(relations, IntMatrix):
        if relations.rows and relations.cols != ngens:
            raise ValueError(f"relation matrix has {relations.cols} columns, expected {ngens}")
        relations = relations.to_rows()
    return FgAbelianGroup(ngens, relations)


def subgroup(group: FgAbelianGroup, elems: Sequence[Sequence[int]]) -> Tuple[FgAbelianGroup, FgabHom]:
    """Subgroup generated by ``elems``, presented on those generators.

    Returns:
        ``(K, inclusion)``
    """
    k = len(elems)
    stacked = [list(group.reduce(e)) for e in elems] + group.relation_rows()
    rels = [row[:k] for row in left_kernel(stacked, group.rank)]
    sub = FgAbelianGroup(k, rels)
    incl = FgabHom.from_generator_images(sub, group, [group.reduce(e) for e in elems])
    return sub, incl


@dataclass
class DirectSum:
    """Direct sum with its structure maps."""

    group: FgAbelianGroup
    summands: List[FgAbelianGroup]
    injections: List[FgabHom]
    projections: List[FgabHom]
    offsets: List[int]

    def pack(self, parts: Sequence[Sequence[int]]) -> Vector:
        """Element of the sum with the given summand components."""
        coords: List[int] = []
        for p in parts:
            coords.extend(p)
        return self.group.from_gens(coords)

    def unpack(self, x: Sequence[int]) -> List[Vector]:
        lift = self.group.to_gens(x)
        return [s.reduce(lift[o:o + s.rank]) for o, s in zip(self.offsets, self.summands)]


def direct_sum(groups: Sequence[FgAbelianGroup]) -> DirectSum:
    """Direct sum presented on the concatenated canonical generators.

    The sum is re-normalized, so its own canonical coordinates are not the
    concatenation; use ``pack`` / ``unpack`` to move between the two.
    """
    invariants: List[int] = []
    offsets: List[int] = []
    for g in groups:
        offsets.append(len(invariants))
        invariants.extend(g.invariants)
    total = FgAbelianGroup.diagonal(invariants)
    summed = DirectSum(total, list(groups), [], [], offsets)
    n = len(invariants)
    for idx, (g, off) in enumerate(zip(groups, offsets)):
        summed.injections.append(FgabHom(
            g, total, [total.from_gens(unit_vector(n, off + i)) for i in range(g.rank)], check=False,
        ))
        summed.projections.append(FgabHom(
            total, g, [summed.unpack(total.gen(k))[idx] for k in range(total.rank)], check=False,
        ))
    return summed


def hom_sum(maps: Sequence[FgabHom], target: FgAbelianGroup, summed: DirectSum) -> FgabHom:
    """The map out of a direct sum given by ``maps`` on the summands."""
    images: List[Vector] = []
    for f in maps:
        images.extend(f.rows)
    return FgabHom.from_generator_images(summed.group, target, images)


def hom_into_sum(maps: Sequence[FgabHom], source: FgAbelianGroup, summed: DirectSum) -> FgabHom:
    """The map into a direct sum with components ``maps``."""
    rows = [summed.pack([f.rows[i] for f in maps]) for i in range(source.rank)]
    return FgabHom(source, summed.group, rows, check=False)


# ---------------------------------------------------------------------------
# Tensor product and Tor


class FgabTensor:
    """Classical tensor product ``A (x) B`` with its generator pairing.

    Presentation generators are canonical pairs ``(i, j)`` indexed
    ``i * B.rank + j``.
    """

    def __init__(self, left: FgAbelianGroup, right: FgAbelianGroup):
        self.left = left
        self.right = right
        ra, rb = left.rank, right.rank
        n = ra * rb
        rels = []
        for i, d in enumerate(left.invariants):
            if d:
                for j in range(rb):
                    rels.append(unit_vector(n, i * rb + j, d))
        for j, e in enumerate(right.invariants):
            if e:
                for i in range(ra):
                    rels.append(unit_vector(n, i * rb + j, e))
        labels = [f"e{i}*f{j}" for i in range(ra) for j in range(rb)]
        self.group = FgAbelianGroup(n, rels, labels)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        """The element ``x (x) y``."""
        rb = self.right.rank
        coeffs = [0] * (self.left.rank * rb)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        coeffs[i * rb + j] += a * b
        return self.group.from_gens(coeffs)

    def pair_gens(self, i: int, j: int) -> Vector:
        return self.group.presentation_gen(i * self.right.rank + j)

    def decompose(self, z: Sequence[int]) -> Dict[Tuple[int, int], int]:
        """Coefficients of a lift of ``z`` on the pairs of canonical generators."""
        lift = self.group.to_gens(z)
        rb = self.right.rank
        return {(g // rb, g % rb): c for g, c in enumerate(lift) if c}

    def lift(self, target: FgAbelianGroup, values: Callable[[int, int], Sequence[int]]) -> FgabHom:
        """Homomorphism out of the tensor product given on generator pairs.

        Args:
            target: Codomain
            values: ``values(i, j)`` is the image of ``e_i (x) f_j``

        Raises:
            ValidationError: If the values do not respect the relations
        """
        images = [values(g // self.right.rank, g % self.right.rank) for g in range(self.group.ngens)]
        return FgabHom.from_generator_images(self.group, target, images)

    def lift_bilinear(self, target: FgAbelianGroup, fn: Callable[[Vector, Vector], Sequence[int]]) -> FgabHom:
        return self.lift(target, lambda i, j: fn(self.left.gen(i), self.right.gen(j)))


def fgab_tensor(a: FgAbelianGroup, b: FgAbelianGroup) -> FgabTensor:
    return FgabTensor(a, b)


def tensor_hom(f: FgabHom, g: FgabHom, source: FgabTensor, target: FgabTensor) -> FgabHom:
    """The homomorphism ``f (x) g`` between tensor products."""
    return source.lift(target.group, lambda i, j: target.pair(f.rows[i], g.rows[j]))


def tensor_swap(source: FgabTensor, target: FgabTensor) -> FgabHom:
    """``a (x) b -> b (x) a``."""
    return source.lift(
        target.group,
        lambda i, j: target.pair(source.right.gen(j), source.left.gen(i)),
    )


def fgab_tor1(a: FgAbelianGroup, b: FgAbelianGroup) -> Tuple[FgAbelianGroup, FgabHom]:
    """Classical ``Tor_1(a, b)`` as the subgroup ``+_i b[d_i]`` of ``b^k``.

    ``d_i`` runs over the torsion invariants of ``a``; the free part of ``a``
    contributes nothing.

    Returns:
        ``(Tor, inclusion into b^k)``
    """
    torsion = a.torsion
    summed = direct_sum([b] * len(torsion))
    images = []
    for idx, d in enumerate(torsion):
        for i in range(b.rank):
            parts = [b.zero()] * len(torsion)
            parts[idx] = b.scale(d, b.gen(i))
            images.append(summed.pack(parts))
    mult = FgabHom.from_generator_images(summed.group, summed.group, images)
    return mult.kernel()


# ---------------------------------------------------------------------------
# Chain complexes


class ChainComplexZ:
    """Chain complex of finitely generated abelian groups.

    ``boundaries[i]`` maps ``groups[i + 1] -> groups[i]``.
    """

    def __init__(self, groups: Sequence[FgAbelianGroup], boundaries: Sequence[FgabHom]):
        if len(boundaries) != max(len(groups) - 1, 0):
            raise ValueError(f"{len(groups)} groups need {max(len(groups) - 1, 0)} boundaries, got {len(boundaries)}")
        for i, d in enumerate(boundaries):
            if d.source is not groups[i + 1] or d.target is not groups[i]:
                raise ValueError(f"boundary {i + 1} does not map degree {i + 1} to degree {i}")
        for i in range(len(boundaries) - 1):
            if not boundaries[i].compose(boundaries[i + 1]).is_zero():
                raise ValidationError(
                    f"d_{i + 1} o d_{i + 2} is not zero",
                    check="complex.composite",
                    witness=i + 1,
                )
        self.groups = list(groups)
        self.boundaries = list(boundaries)

    def __len__(self) -> int:
        return len(self.groups)

    def cycles(self, degree: int) -> Tuple[FgAbelianGroup, FgabHom]:
        if degree == 0:
            g = self.groups[0]
            return g, FgabHom.identity(g)
        return self.boundaries[degree - 1].kernel()

    def boundary_images(self, degree: int) -> List[Vector]:
        if degree + 1 >= len(self.groups):
            return []
        return list(self.boundaries[degree].rows)


def chain_homology(c: ChainComplexZ, degree: int) -> FgAbelianGroup:
    """Homology ``ker d_degree / im d_{degree+1}``.

    Raises:
        ValueError: If ``degree`` is outside the complex
    """
    return homology_with_projection(c, degree)[0]


def homology_with_projection(c: ChainComplexZ, degree: int) -> Tuple[FgAbelianGroup, FgabHom, FgabHom]:
    """Homology with the cycle inclusion and the projection cycles -> homology.

    Returns:
        ``(H, cycles_inclusion, projection)``
    """
    if degree < 0 or degree >= len(c.groups):
        raise ValueError(f"degree {degree} outside the complex (0..{len(c.groups) - 1})")
    cycles, incl = c.cycles(degree)
    lifted = []
    for y in c.boundary_images(degree):
        x = incl.preimage(y)
        if x is None:
            raise ValidationError("boundary is not a cycle", check="complex.boundary", witness=y)
        lifted.append(list(x))
    h, proj = cycles.quotient(lifted)
    logger.debug(f"H_{degree} = {h}")
    return h, incl, proj
