"""Square groups, their morphisms and derived operators.

A square group is a diagram ``M_e --H--> M_ee --P--> M_e`` where ``M_e`` is a
nil2 group, ``M_ee`` an abelian group, ``P`` a homomorphism into the centre
and ``H`` a quadratic map, subject to

    (Pa | y)_H = 0 = (x | Pb)_H
    P (x | y)_H = -x - y + x + y
    PHP(a) = 2 P(a)

All laws are checked on generators and generator pairs; the cross-effect is
bilinear and ``HP`` is additive, so this covers every element.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from .checks import CheckReport
from .nil2 import (
    AbelianImage,
    CentralHom,
    Nil2Datum,
    Nil2Element,
    Nil2Hom,
    QuadraticMap,
    nil2_product,
    validate_nil2,
)
from .utils import ValidationError, binom2, setup_logger, shared_property
from .zalgebra import FgAbelianGroup, FgabHom, FgabTensor, Vector, direct_sum, subgroup


logger = setup_logger(__name__)


class SquareGroup:
    """A square group ``(M_e, M_ee, P, H)``.

    Attributes:
        e: The e-level nil2 datum
        ee: The ee-level abelian group
        p: ``P`` as a central homomorphism ``ee -> e``
        h: ``H`` as a quadratic map ``e -> ee``
        kind: Constructor tag used for dispatch
        label: Display name
        params: Constructor parameters (kept for dispatch and serialization)
    """

    def __init__(
        self,
        e: Nil2Datum,
        ee: FgAbelianGroup,
        p: CentralHom,
        h: QuadraticMap,
        kind: str = "custom",
        label: Optional[str] = None,
        params: Optional[Dict[str, object]] = None,
        check: bool = True,
    ):
        if p.target is not e or h.source is not e:
            raise ValueError("P and H must be defined on the given e-level datum")
        if p.source.rank != ee.rank or h.target.rank != ee.rank:
            raise ValueError("P and H must be defined on the given ee-level group")
        self.e = e
        self.ee = ee
        self.p = p
        self.h = h
        self.kind = kind
        self.label = label or kind
        self.params = dict(params or {})
        if check:
            validate_square_group(self).raise_for_failure()
        logger.debug(f"square group {self.label}: e has {e.nwords} word generators, ee = {ee}")

    # -- structure maps -----------------------------------------------------

    def P(self, a: Sequence[int]) -> Nil2Element:
        return self.p.apply(a)

    def H(self, x: Nil2Element) -> Vector:
        return self.h(x)

    def cross(self, x: Nil2Element, y: Nil2Element) -> Vector:
        """The cross-effect ``(x | y)_H``."""
        return self.h.cross_effect(x, y)

    def delta(self, x: Nil2Element) -> Vector:
        """``Delta(x) = (x|x)_H - H(x) + T H(x)``."""
        ee = self.ee
        hx = self.H(x)
        return ee.add(self.cross(x, x), ee.neg(hx), self.T(hx))

    def T(self, a: Sequence[int]) -> Vector:
        """``T = HP - Id``."""
        return self.ee.sub(self.H(self.P(a)), a)

    def word_gens(self) -> List[Nil2Element]:
        return self.e.word_gens()

    # -- derived data -------------------------------------------------------

    @shared_property
    def coker(self) -> AbelianImage:
        """``Coker(P)`` with its projection from ``M_e``."""
        return self.e.abelian_quotient([self.P(a) for a in self.ee.gens()])

    @shared_property
    def derived(self) -> "DerivedData":
        return derive(self)

    def linear_elements(self) -> List[Nil2Element]:
        """Elements with ``H(x) = 0`` of a finite square group."""
        return [x for x in self.e.elements() if not any(self.H(x))]

    # -- classification -----------------------------------------------------

    def is_abelian(self) -> bool:
        """``H`` is a homomorphism (and hence ``M_e`` is abelian)."""
        gens = self.word_gens()
        return all(not any(self.cross(x, y)) for x in gens for y in gens)

    def is_quadratic_z_module(self) -> bool:
        return self.is_abelian() and self.derived.delta.is_zero()

    def is_finite(self) -> bool:
        return self.e.is_finite() and self.ee.is_finite()

    def is_zero(self) -> bool:
        return self.e.is_trivial() and self.ee.is_trivial()

    def summary(self) -> Dict[str, str]:
        return {
            "e.generators": str(self.e.n),
            "e.central": str(self.e.central),
            "e.abelianization": str(self.e.abelianization.group),
            "ee": str(self.ee),
            "coker_p": str(self.coker.group),
        }

    def __repr__(self) -> str:
        return f"SquareGroup({self.label}: e={list(self.e.names)}, ee={self.ee})"


def validate_square_group(m: SquareGroup) -> CheckReport:
    """Check the square-group axioms on generators and generator pairs.

    Args:
        m: Square group to validate

    Returns:
        CheckReport with one entry per axiom; failures carry a witness
    """
    report = CheckReport(title=f"square group {m.label}")
    report.merge(validate_nil2(m.e), prefix="sg.")
    report.merge(m.p.check_report(), prefix="sg.")
    report.merge(m.h.descent_report(), prefix="sg.")
    if not report.ok:
        return report

    names = m.e.word_names()
    gens = m.word_gens()
    p_images = [m.P(a) for a in m.ee.gens()]

    bad = None
    for i, pa in enumerate(p_images):
        for g, y in enumerate(gens):
            if any(m.cross(pa, y)) or any(m.cross(y, pa)):
                bad = f"(P(ee{i}) | {names[g]})"
                break
        if bad:
            break
    report.add("sg.cross_p", bad is None, bad)

    bad = None
    for g, x in enumerate(gens):
        for h, y in enumerate(gens):
            if m.P(m.cross(x, y)) != m.e.commutator(x, y):
                bad = f"P({names[g]} | {names[h]}) != [{names[g]}, {names[h]}]"
                break
        if bad:
            break
    report.add("sg.p_cross", bad is None, bad)

    bad = None
    for i, (a, pa) in enumerate(zip(m.ee.gens(), p_images)):
        if m.P(m.H(pa)) != m.e.scale(2, pa):
            bad = f"PHP(ee{i}) != 2P(ee{i})"
            break
    report.add("sg.php", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# Derived data


@dataclass
class DerivedData:
    """Derived operators of a square group.

    Attributes:
        T: The involution ``HP - Id`` of ``M_ee``
        coker: ``Coker(P)`` with its projection
        delta: ``Delta: Coker(P) -> M_ee``
        cross_tensor: ``Coker(P) (x) Coker(P)``
        cross_hom: The cross-effect homomorphism out of ``cross_tensor``
        q_group: ``M_ee / (Id - T)``
        q_proj: Projection ``M_ee -> q_group``
        ker_pbar: ``Ker(P: q_group -> M_e)``
        ker_pbar_incl: Its inclusion into ``q_group``
        k: ``k: Coker(P) -> ker_pbar``
    """

    square: SquareGroup
    T: FgabHom
    coker: AbelianImage
    delta: FgabHom
    cross_tensor: FgabTensor
    cross_hom: FgabHom
    q_group: FgAbelianGroup
    q_proj: FgabHom
    ker_pbar: FgAbelianGroup
    ker_pbar_incl: FgabHom
    k: FgabHom

    def check_report(self) -> CheckReport:
        """Re-check ``T^2 = Id``, ``PT = P``, ``T(x|y) + (y|x) = 0``,
        ``Delta P = 0``, ``P Delta = 0`` and ``Delta + T Delta = 0``."""
        m = self.square
        ee = m.ee
        report = CheckReport(title=f"derived data of {m.label}")
        names = m.e.word_names()
        gens = m.word_gens()

        report.add("derived.t_involution", self.T.compose(self.T).equals(FgabHom.identity(ee)))
        bad = next((i for i, a in enumerate(ee.gens()) if m.P(self.T(a)) != m.P(a)), None)
        report.add("derived.pt", bad is None, None if bad is None else f"ee{bad}")

        bad = None
        for g, x in enumerate(gens):
            for h, y in enumerate(gens):
                if any(ee.add(self.T(m.cross(x, y)), m.cross(y, x))):
                    bad = f"({names[g]}, {names[h]})"
                    break
            if bad:
                break
        report.add("derived.t_cross", bad is None, bad)

        bad = next((i for i, a in enumerate(ee.gens()) if any(m.delta(m.P(a)))), None)
        report.add("derived.delta_p", bad is None, None if bad is None else f"ee{bad}")

        bad = next((names[g] for g, x in enumerate(gens) if not m.P(m.delta(x)).is_zero()), None)
        report.add("derived.p_delta", bad is None, bad)

        bad = next(
            (names[g] for g, x in enumerate(gens) if any(ee.add(m.delta(x), self.T(m.delta(x))))),
            None,
        )
        report.add("derived.delta_t", bad is None, bad)
        return report

    def k_of(self, x: Nil2Element) -> Vector:
        """``k(x-bar)`` in canonical coordinates of ``ker_pbar``."""
        return self.k(self.coker(x))

    def k_in_q(self, x: Nil2Element) -> Vector:
        """``k(x-bar)`` pushed into ``M_ee / (Id - T)``."""
        return self.ker_pbar_incl(self.k_of(x))


def derive(m: SquareGroup) -> DerivedData:
    """Compute ``T``, ``Delta``, the cross-effect homomorphism, ``Coker(P)`` and ``k``.

    Raises:
        ValidationError: If ``(x|x)_H`` does not land in ``Ker(P-bar)``
    """
    ee = m.ee
    T = FgabHom.from_function(ee, ee, m.T)
    coker = m.coker
    gens = m.word_gens()
    delta = FgabHom.from_generator_images(coker.group, ee, [m.delta(x) for x in gens])

    cross_tensor = FgabTensor(coker.group, coker.group)
    lifts = [coker.lift(c) for c in coker.group.gens()]
    cross_hom = cross_tensor.lift(ee, lambda i, j: m.cross(lifts[i], lifts[j]))

    q_group, q_proj = ee.quotient([ee.sub(a, T(a)) for a in ee.gens()])
    ker_p = m.p.kernel_vectors()
    ker_pbar, ker_incl = subgroup(q_group, [q_proj(v) for v in ker_p])
    k_images = []
    for x in gens:
        value = ker_incl.preimage(q_proj(m.cross(x, x)))
        if value is None:
            raise ValidationError(
                "(x|x)_H does not lie in Ker(P) modulo (Id - T)",
                check="derived.k",
                witness=m.e.format(x),
            )
        k_images.append(value)
    k = FgabHom.from_generator_images(coker.group, ker_pbar, k_images)
    logger.debug(f"derived {m.label}: Coker(P) = {coker.group}, ee/(Id-T) = {q_group}, Ker(P-bar) = {ker_pbar}")
    return DerivedData(m, T, coker, delta, cross_tensor, cross_hom, q_group, q_proj, ker_pbar, ker_incl, k)


# ---------------------------------------------------------------------------
# n*


def n_star(m: SquareGroup, n: int) -> Nil2Hom:
    """The endomorphism ``n*(x) = n x + C(n, 2) P H(x)`` of ``M_e``."""
    images = [m.e.scale(n, x) + m.e.scale(binom2(n), m.P(m.H(x))) for x in m.word_gens()]
    return Nil2Hom(m.e, m.e, images)


def n_star_report(m: SquareGroup, values: Sequence[int] = (-3, -2, -1, 0, 1, 2, 3)) -> CheckReport:
    """Check ``(nk)* = n* k*``, ``P(n^2 a) = n*(P a)`` and ``(n* x | n* y) = n^2 (x|y)``."""
    report = CheckReport(title=f"n* laws of {m.label}")
    stars = {n: n_star(m, n) for n in values}
    bad = None
    for n in values:
        for k in values:
            if n * k not in stars:
                stars[n * k] = n_star(m, n * k)
            problem = stars[n * k].mismatch(stars[n].compose(stars[k]))
            if problem:
                bad = f"n={n}, k={k}: {problem}"
                break
        if bad:
            break
    report.add("nstar.multiplicative", bad is None, bad)

    bad = None
    for n in values:
        for i, a in enumerate(m.ee.gens()):
            if m.P(m.ee.scale(n * n, a)) != stars[n](m.P(a)):
                bad = f"n={n}, ee{i}"
                break
        if bad:
            break
    report.add("nstar.p", bad is None, bad)

    bad = None
    gens = m.word_gens()
    names = m.e.word_names()
    for n in values:
        for g, x in enumerate(gens):
            for h, y in enumerate(gens):
                lhs = m.cross(stars[n](x), stars[n](y))
                if lhs != m.ee.scale(n * n, m.cross(x, y)):
                    bad = f"n={n}, ({names[g]}, {names[h]})"
                    break
            if bad:
                break
        if bad:
            break
    report.add("nstar.cross", bad is None, bad)
    return report


# ---------------------------------------------------------------------------
# Morphisms


class SgMorphism:
    """Morphism of square groups given by its two levels.

    Attributes:
        source: Source square group
        target: Target square group
        fe: e-level nil2 homomorphism
        fee: ee-level homomorphism
    """

    def __init__(self, source: SquareGroup, target: SquareGroup, fe: Nil2Hom, fee: FgabHom, check: bool = True):
        if fe.source is not source.e or fe.target is not target.e:
            raise ValueError("e-level map does not match the square groups")
        if fee.source.rank != source.ee.rank or fee.target.rank != target.ee.rank:
            raise ValueError("ee-level map does not match the square groups")
        self.source = source
        self.target = target
        self.fe = fe
        self.fee = fee
        if check:
            self.check_report().raise_for_failure()

    @classmethod
    def from_images(
        cls,
        source: SquareGroup,
        target: SquareGroup,
        e_images: Sequence[Nil2Element],
        ee_rows: Sequence[Sequence[int]],
        check: bool = True,
    ) -> "SgMorphism":
        """Build from images of the e-level word generators and ee-level canonical generators."""
        fe = Nil2Hom(source.e, target.e, e_images, check=check)
        fee = FgabHom(source.ee, target.ee, ee_rows, check=check)
        return cls(source, target, fe, fee, check=check)

    @classmethod
    def identity(cls, m: SquareGroup) -> "SgMorphism":
        return cls(m, m, Nil2Hom.identity(m.e), FgabHom.identity(m.ee), check=False)

    @classmethod
    def zero(cls, source: SquareGroup, target: SquareGroup) -> "SgMorphism":
        return cls(
            source, target,
            Nil2Hom.zero(source.e, target.e), FgabHom.zero(source.ee, target.ee),
            check=False,
        )

    def check_report(self) -> CheckReport:
        """Check ``f_e P = P f_ee`` and ``f_ee H = H f_e`` (values and cross-effects)."""
        s, t = self.source, self.target
        report = CheckReport(title="square group morphism")
        report.merge(self.fe.check_report(), prefix="morphism.")
        if not report.ok:
            return report

        bad = next(
            (i for i, a in enumerate(s.ee.gens()) if self.fe(s.P(a)) != t.P(self.fee(a))),
            None,
        )
        report.add("morphism.p", bad is None, None if bad is None else f"ee{bad}")

        names = s.e.word_names()
        gens = s.word_gens()
        images = [self.fe(x) for x in gens]
        bad = next(
            (names[g] for g, (x, fx) in enumerate(zip(gens, images)) if self.fee(s.H(x)) != t.H(fx)),
            None,
        )
        report.add("morphism.h", bad is None, bad)

        bad = None
        for g, (x, fx) in enumerate(zip(gens, images)):
            for h, (y, fy) in enumerate(zip(gens, images)):
                if self.fee(s.cross(x, y)) != t.cross(fx, fy):
                    bad = f"({names[g]} | {names[h]})"
                    break
            if bad:
                break
        report.add("morphism.cross", bad is None, bad)
        return report

    def __call__(self, x: Nil2Element) -> Nil2Element:
        return self.fe(x)

    def compose(self, inner: "SgMorphism") -> "SgMorphism":
        """Return ``self o inner``."""
        if inner.target is not self.source:
            raise ValueError("composition of non-composable square group morphisms")
        return SgMorphism(
            inner.source, self.target,
            self.fe.compose(inner.fe), self.fee.compose(inner.fee),
            check=False,
        )

    def mismatch(self, other: "SgMorphism") -> Optional[str]:
        """First generator where two parallel morphisms differ, or None."""
        problem = self.fe.mismatch(other.fe)
        if problem:
            return f"e: {problem}"
        for i, (a, b) in enumerate(zip(self.fee.rows, other.fee.rows)):
            if a != b:
                return f"ee{i}: {a} != {b}"
        return None

    def equals(self, other: "SgMorphism") -> bool:
        return self.mismatch(other) is None

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.fe.images) and self.fee.is_zero()

    def is_iso(self) -> bool:
        return self.fee.is_iso() and self.fe.is_iso()

    def inverse(self) -> "SgMorphism":
        """Inverse of an isomorphism.

        Raises:
            ValidationError: If either level is not bijective
        """
        return SgMorphism(self.target, self.source, self.fe.inverse(), self.fee.inverse(), check=True)

    def is_epi(self) -> bool:
        return self.fe.is_surjective() and self.fee.is_surjective()

    def __repr__(self) -> str:
        return f"SgMorphism({self.source.label} -> {self.target.label})"


def check_inverse_pair(f: SgMorphism, g: SgMorphism) -> CheckReport:
    """Check that ``g o f`` and ``f o g`` are identities on generators."""
    report = CheckReport(title="inverse pair")
    problem = g.compose(f).mismatch(SgMorphism.identity(f.source))
    report.add("inverse.left", problem is None, problem)
    problem = f.compose(g).mismatch(SgMorphism.identity(f.target))
    report.add("inverse.right", problem is None, problem)
    return report


def morphism_from_functions(
    source: SquareGroup,
    target: SquareGroup,
    fe: Callable[[Nil2Element], Nil2Element],
    fee: Callable[[Vector], Sequence[int]],
    check: bool = True,
) -> SgMorphism:
    """Morphism defined by level functions evaluated on generators."""
    return SgMorphism.from_images(
        source, target,
        [fe(x) for x in source.word_gens()],
        [fee(a) for a in source.ee.gens()],
        check=check,
    )


# ---------------------------------------------------------------------------
# Finite products


@dataclass
class SquareProduct:
    """``M x N`` with its projections and injections."""

    square: SquareGroup
    projections: List[SgMorphism]
    injections: List[SgMorphism]

    def pair(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.injections[0](x) + self.injections[1](y)

    def induced(self, f: "SgMorphism", g: "SgMorphism", check: bool = True) -> "SgMorphism":
        """The morphism ``X -> M x N`` with components ``f`` and ``g``."""
        if f.source is not g.source:
            raise ValueError("product legs must share their source")
        ee = self.square.ee
        inl, inr = self.injections
        return SgMorphism.from_images(
            f.source, self.square,
            [self.pair(f(x), g(x)) for x in f.source.word_gens()],
            [ee.add(inl.fee(f.fee(a)), inr.fee(g.fee(a))) for a in f.source.ee.gens()],
            check=check,
        )


def product(m: SquareGroup, n: SquareGroup, label: Optional[str] = None) -> SquareProduct:
    """Levelwise product; ``H`` and ``P`` act componentwise."""
    prod = nil2_product(m.e, n.e)
    summed = direct_sum([m.ee, n.ee])
    pl, pr = prod.projections

    p_images = []
    for a in summed.group.gens():
        left, right = summed.unpack(a)
        p_images.append(prod.pair(m.P(left), n.P(right)))
    p = CentralHom(summed.group, prod.datum, p_images, check=False)
    h = QuadraticMap.from_function(
        prod.datum, summed.group,
        lambda w: summed.pack([m.H(pl(w)), n.H(pr(w))]),
        lambda w, z: summed.pack([m.cross(pl(w), pl(z)), n.cross(pr(w), pr(z))]),
    )
    square = SquareGroup(
        prod.datum, summed.group, p, h,
        kind="product", label=label or f"({m.label} x {n.label})",
        params={"factors": (m, n)},
    )
    projections = [
        SgMorphism(square, m, pl, summed.projections[0], check=False),
        SgMorphism(square, n, pr, summed.projections[1], check=False),
    ]
    injections = [
        SgMorphism(m, square, prod.injections[0], summed.injections[0], check=False),
        SgMorphism(n, square, prod.injections[1], summed.injections[1], check=False),
    ]
    return SquareProduct(square, projections, injections)
