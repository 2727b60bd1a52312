"""Bilinear maps of square groups and their factorization through the tensor product."""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .checks import CheckReport
from .nil2 import Nil2Element
from .sqcore import SgMorphism, SquareGroup
from .tensor import TensorProduct, symmetry, tensor
from .utils import setup_logger
from .zalgebra import FgabHom


logger = setup_logger(__name__)


Pairing = Callable[[Nil2Element, Nil2Element], Nil2Element]
EePairing = Callable[[Sequence[int], Sequence[int]], Sequence[int]]


@dataclass
class BilinearMap:
    """A bilinear map ``(A, B) -> C``.

    ``phi_l`` behaves like ``x (.) y`` (additive in ``y``), ``phi_r`` like
    ``x |> y`` (additive in ``x``) and ``phi_ee`` is bilinear on the
    ee-levels.

    Attributes:
        left: ``A``
        right: ``B``
        target: ``C``
        phi_l: ``A_e x B_e -> C_e``
        phi_r: ``A_e x B_e -> C_e``
        phi_ee: ``A_ee x B_ee -> C_ee``
    """

    left: SquareGroup
    right: SquareGroup
    target: SquareGroup
    phi_l: Pairing
    phi_r: Pairing
    phi_ee: EePairing

    def p_ee(self, a: Sequence[int], b: Sequence[int]) -> Nil2Element:
        return self.target.P(self.phi_ee(a, b))

    def then(self, f: SgMorphism) -> "BilinearMap":
        """``f o phi``."""
        if f.source is not self.target:
            raise ValueError("morphism does not start at the target of the bilinear map")
        return BilinearMap(
            self.left, self.right, f.target,
            lambda x, y: f(self.phi_l(x, y)),
            lambda x, y: f(self.phi_r(x, y)),
            lambda a, b: f.fee(self.phi_ee(a, b)),
        )

    def ee_hom(self, tp: TensorProduct) -> FgabHom:
        """``phi_ee`` as a homomorphism out of ``A_ee (x) B_ee``."""
        return tp.ee_tensor.lift_bilinear(self.target.ee, self.phi_ee)


def bilinear_report(phi: BilinearMap) -> CheckReport:
    """Check the laws of a bilinear map on generators and generator pairs."""
    a, b, c = phi.left, phi.right, phi.target
    report = CheckReport(title=f"bilinear map ({a.label}, {b.label}) -> {c.label}")
    xs, ys = a.word_gens(), b.word_gens()
    xn, yn = a.e.word_names(), b.e.word_names()
    ce = c.ee

    def first(name: str, cases, predicate) -> None:
        witness = next((label for label, args in cases if not predicate(*args)), None)
        report.add(name, witness is None, witness)

    grid = [(f"{xn[g]},{yn[h]}", (x, y)) for g, x in enumerate(xs) for h, y in enumerate(ys)]
    first("bil.ee_bilinear", [
        (f"ee{i},ee{j}+ee{k}", (u, v, w))
        for i, u in enumerate(a.ee.gens()) for j, v in enumerate(b.ee.gens()) for k, w in enumerate(b.ee.gens())
    ], lambda u, v, w: ce.reduce(phi.phi_ee(u, b.ee.add(v, w))) == ce.add(phi.phi_ee(u, v), phi.phi_ee(u, w)))
    first("bil.l_linear", [
        (f"{xn[g]},{yn[h]}+{yn[h2]}", (x, y, y2))
        for g, x in enumerate(xs) for h, y in enumerate(ys) for h2, y2 in enumerate(ys)
    ], lambda x, y, y2: phi.phi_l(x, y + y2) == phi.phi_l(x, y) + phi.phi_l(x, y2))
    first("bil.l_quadratic", [
        (f"{xn[g]}+{xn[g2]},{yn[h]}", (x, x2, y))
        for g, x in enumerate(xs) for g2, x2 in enumerate(xs) for h, y in enumerate(ys)
    ], lambda x, x2, y: phi.phi_l(x + x2, y)
        == phi.phi_l(x, y) + phi.phi_l(x2, y) + phi.p_ee(a.cross(x2, x), b.H(y)))
    first("bil.r_linear", [
        (f"{xn[g]}+{xn[g2]},{yn[h]}", (x, x2, y))
        for g, x in enumerate(xs) for g2, x2 in enumerate(xs) for h, y in enumerate(ys)
    ], lambda x, x2, y: phi.phi_r(x + x2, y) == phi.phi_r(x, y) + phi.phi_r(x2, y))
    first("bil.r_quadratic", [
        (f"{xn[g]},{yn[h]}+{yn[h2]}", (x, y, y2))
        for g, x in enumerate(xs) for h, y in enumerate(ys) for h2, y2 in enumerate(ys)
    ], lambda x, y, y2: phi.phi_r(x, y + y2)
        == phi.phi_r(x, y) + phi.phi_r(x, y2) + phi.p_ee(a.H(x), b.cross(y2, y)))
    first("bil.l_p", [
        (f"P(ee{i}),{yn[h]}", (u, y)) for i, u in enumerate(a.ee.gens()) for h, y in enumerate(ys)
    ], lambda u, y: phi.phi_l(a.P(u), y) == phi.p_ee(u, b.delta(y)))
    first("bil.r_p", [
        (f"{xn[g]},P(ee{j})", (x, v)) for g, x in enumerate(xs) for j, v in enumerate(b.ee.gens())
    ], lambda x, v: phi.phi_r(x, b.P(v)) == phi.p_ee(a.delta(x), v))
    first("bil.h_l", grid, lambda x, y: c.H(phi.phi_l(x, y))
          == ce.add(phi.phi_ee(a.cross(x, x), b.H(y)), phi.phi_ee(a.H(x), b.delta(y))))
    first("bil.h_r", grid, lambda x, y: c.H(phi.phi_r(x, y))
          == ce.add(phi.phi_ee(a.delta(x), b.H(y)), phi.phi_ee(a.H(x), b.cross(y, y))))
    first("bil.tt", [
        (f"ee{i},ee{j}", (u, v)) for i, u in enumerate(a.ee.gens()) for j, v in enumerate(b.ee.gens())
    ], lambda u, v: phi.p_ee(a.T(u), b.T(v)) == -phi.p_ee(u, v))
    first("bil.difference", grid, lambda x, y: phi.phi_l(x, y) - phi.phi_r(x, y) == phi.p_ee(a.H(x), b.T(b.H(y))))
    return report


def universal(tp: TensorProduct) -> BilinearMap:
    """``un``: ``(x, y) -> x (.) y``, ``(x, y) -> x |> y``, ``(a, b) -> a (x) b``."""
    return BilinearMap(tp.left, tp.right, tp.result, tp.odot, tp.tr, tp.pair)


def twisted_universal(tp: TensorProduct, reverse: Optional[TensorProduct] = None) -> BilinearMap:
    """``(x, y) -> y |> x``, ``(x, y) -> y (.) x``, ``(a, b) -> b (x) a`` into ``B (.) A``."""
    reverse = reverse or tensor(tp.right, tp.left)
    return BilinearMap(
        tp.left, tp.right, reverse.result,
        lambda x, y: reverse.tr(y, x),
        lambda x, y: reverse.odot(y, x),
        lambda u, v: reverse.pair(v, u),
    )


def zero_bilinear(a: SquareGroup, b: SquareGroup, c: SquareGroup) -> BilinearMap:
    zero_e = c.e.zero()
    return BilinearMap(a, b, c, lambda x, y: zero_e, lambda x, y: zero_e, lambda u, v: c.ee.zero())


def bilinear_factorize(phi: BilinearMap, tp: Optional[TensorProduct] = None) -> SgMorphism:
    """The unique morphism ``f: A (.) B -> C`` with ``phi = f o un``.

    ``f(x (.) y) = phi_l(x, y)`` and ``f(a (x) b) = phi_ee(a, b)``; the
    values on ``x |> y`` are then checked against ``phi_r``.

    Raises:
        ValidationError: If ``phi`` violates a law of bilinear maps
    """
    tp = tp or tensor(phi.left, phi.right)
    if tp.left is not phi.left or tp.right is not phi.right:
        raise ValueError("tensor product does not match the bilinear map")
    bilinear_report(phi).raise_for_failure()
    f = tp.lift_morphism(
        phi.target,
        lambda g, h: phi.phi_l(tp.xs[g], tp.ys[h]),
        phi.ee_hom(tp),
    )
    report = CheckReport(title="factorization")
    witness = next(
        (f"{g},{h}" for g, x in enumerate(tp.xs) for h, y in enumerate(tp.ys) if f(tp.tr(x, y)) != phi.phi_r(x, y)),
        None,
    )
    report.add("bil.factor_r", witness is None, witness)
    report.raise_for_failure()
    logger.debug(f"factorized bilinear map through {tp.label}")
    return f


def factorization_report(tp: TensorProduct) -> CheckReport:
    """``un`` factors as the identity and the twisted map as ``tau``."""
    report = CheckReport(title=f"universal property of {tp.label}")
    ident = bilinear_factorize(universal(tp), tp)
    problem = ident.mismatch(SgMorphism.identity(tp.result))
    report.add("bil.universal_identity", problem is None, problem)
    reverse = tensor(tp.right, tp.left)
    twisted = bilinear_factorize(twisted_universal(tp, reverse), tp)
    problem = twisted.mismatch(symmetry(tp, reverse))
    report.add("bil.universal_symmetry", problem is None, problem)
    return report

