"""Standard square groups.

Each constructor returns a validated SquareGroup tagged with ``kind`` so
that tensor products can dispatch to closed forms.
"""

from typing import Optional, Sequence, Tuple

from .nil2 import CentralHom, FreeNil2Group, Nil2Datum, Nil2Hom, QuadraticMap, nil2_product, quad_extend
from .sqcore import SgMorphism, SquareGroup, product
from .utils import ShapeMismatchError, ValidationError, setup_logger
from .zalgebra import FgAbelianGroup, FgabHom, direct_sum, unit_vector


logger = setup_logger(__name__)


def znil() -> SquareGroup:
    """``Z_nil = (Z --H--> Z --0--> Z)`` with ``H(n) = C(n, 2)``."""
    e = Nil2Datum.abelian(FgAbelianGroup.free(1), ["1"])
    ee = FgAbelianGroup.free(1, ["1*1"])
    h = QuadraticMap(e, ee, [(0,)], [[(1,)]])
    return SquareGroup(e, ee, CentralHom.zero(ee, e), h, kind="znil", label="Z_nil")


def znil_set(names: Sequence[str]) -> SquareGroup:
    """``Z_nil[S]``: free nil2 group on ``S`` with ``M_ee = Z[S] (x) Z[S]``.

    ``H(s) = 0``, ``(s|t) = t (x) s`` and ``P(s (x) t) = [t, s]``.
    """
    names = tuple(names)
    g = FreeNil2Group(names)
    e = g.datum
    k = len(names)
    ee = FgAbelianGroup.free(k * k, [f"{s}*{t}" for s in names for t in names])
    phi = [[unit_vector(k * k, v * k + u) for v in range(k)] for u in range(k)]
    h = quad_extend([ee.zero()] * k, phi, g, ee)
    images = [e.commutator(e.gen(j), e.gen(i)) for i in range(k) for j in range(k)]
    p = CentralHom(ee, e, images, check=False)
    label = "Z_nil[" + ",".join(names) + "]"
    return SquareGroup(e, ee, p, h, kind="znil_set", label=label, params={"names": names})


def a_tensor(a: FgAbelianGroup, label: Optional[str] = None) -> SquareGroup:
    """``A^(x)``: ``e = A``, ``ee = A + A``, ``P(a, b) = a + b``, ``H(a) = (a, a)``."""
    e = Nil2Datum.abelian(a)
    summed = direct_sum([a, a])
    ee = summed.group
    images = []
    for x in ee.gens():
        left, right = summed.unpack(x)
        images.append(e.element(list(a.add(left, right))))
    p = CentralHom(ee, e, images, check=False)
    values = [summed.pack([a.gen(i), a.gen(i)]) for i in range(a.rank)]
    zero = ee.zero()
    h = QuadraticMap(e, ee, values, [[zero] * a.rank for _ in range(a.rank)])
    return SquareGroup(
        e, ee, p, h,
        kind="atensor", label=label or f"({a})^(x)", params={"group": a, "sum": summed},
    )


def zq() -> SquareGroup:
    """``Z^Q``: ``e = Z^2`` on ``(s, PHs)``, ``ee = Z^3`` on ``(Hs, HPHs, (s|s))``.

    ``P(a, b, c) = (0, a + 2b)`` and ``H(m, n) = (m, n, C(m, 2))``.
    """
    e = Nil2Datum.abelian(FgAbelianGroup.free(2), ["s", "PHs"])
    ee = FgAbelianGroup.free(3, ["Hs", "HPHs", "(s|s)"])
    p = CentralHom(ee, e, [e.element([0, 1]), e.element([0, 2]), e.zero()], check=False)
    zero = (0, 0, 0)
    h = QuadraticMap(e, ee, [(1, 0, 0), (0, 1, 0)], [[(0, 0, 1), zero], [zero, zero]])
    return SquareGroup(e, ee, p, h, kind="zq", label="Z^Q")


def v_free(names: Sequence[str]) -> SquareGroup:
    """``V(S)``, the coproduct of copies of ``Z^Q`` indexed by ``S``.

    ``e = <S>^nil x Z[PHS]`` and ``ee = Z[HS] + Z[S x S] + Z[HPHS]``.
    """
    names = tuple(names)
    k = len(names)
    prod = nil2_product(Nil2Datum.free(names), Nil2Datum.abelian(FgAbelianGroup.free(k), [f"PH{s}" for s in names]))
    e = prod.datum
    labels = [f"H{s}" for s in names]
    labels += [f"({s}|{t})" for s in names for t in names]
    labels += [f"HPH{s}" for s in names]
    ee = FgAbelianGroup.free(2 * k + k * k, labels)

    def pair(a: int, b: int) -> int:
        return k + a * k + b

    lattice = [e.gen(i) for i in range(2 * k)]
    images = [lattice[k + i] for i in range(k)]
    images += [e.commutator(lattice[a], lattice[b]) for a in range(k) for b in range(k)]
    images += [e.scale(2, lattice[k + i]) for i in range(k)]
    p = CentralHom(ee, e, images, check=False)

    n = ee.rank
    values = [unit_vector(n, i) for i in range(k)] + [unit_vector(n, k + k * k + i) for i in range(k)]
    # the product keeps the free centre in its canonical coordinates
    values += [ee.zero()] * e.central.rank
    for (a, b), idx in prod.factors[0].pair_index.items():
        values[2 * k + idx] = ee.sub(unit_vector(n, pair(a, b)), unit_vector(n, pair(b, a)))

    p_words = e.nwords
    cross = [[ee.zero()] * p_words for _ in range(p_words)]
    for a in range(k):
        for b in range(k):
            cross[a][b] = ee.reduce(unit_vector(n, pair(a, b)))
    h = QuadraticMap(e, ee, values, cross)
    return SquareGroup(e, ee, p, h, kind="vfree", label="V(" + ",".join(names) + ")", params={"names": names})


def e_involution(lattice: FgAbelianGroup, tau: FgabHom, label: Optional[str] = None) -> SquareGroup:
    """``E(L, tau)``: ``ee = L``, ``e = Coker(Id + tau)``, ``P`` the projection, ``H`` induced by ``Id - tau``.

    Raises:
        ShapeMismatchError: If ``tau`` is not an endomorphism of a group shaped like ``L``
        ValidationError: If ``tau`` is not an involution of ``L``
    """
    if tau.source.invariants != lattice.invariants or tau.target.invariants != lattice.invariants:
        raise ShapeMismatchError(
            f"involution must be an endomorphism of {lattice}, got {tau.source} -> {tau.target}"
        )
    if tau.source is not lattice or tau.target is not lattice:
        tau = FgabHom(lattice, lattice, tau.rows)
    if not tau.compose(tau).equals(FgabHom.identity(lattice)):
        raise ValidationError("tau o tau != Id", check="involution", witness=[list(r) for r in tau.rows])
    ident = FgabHom.identity(lattice)
    coker, proj = lattice.quotient([(ident + tau)(x) for x in lattice.gens()])
    e = Nil2Datum.abelian(coker)
    images = [e.element(list(proj(x))) for x in lattice.gens()]
    p = CentralHom(lattice, e, images, check=False)
    minus = ident - tau
    values = [minus(lattice.reduce(coker.to_gens(y))) for y in coker.gens()]
    zero = lattice.zero()
    h = QuadraticMap(e, lattice, values, [[zero] * coker.rank for _ in range(coker.rank)])
    return SquareGroup(
        e, lattice, p, h,
        kind="involution", label=label or f"E({lattice})", params={"lattice": lattice, "tau": tau, "coker": coker},
    )


def involution_by_name(a: FgAbelianGroup, name: str) -> Tuple[FgAbelianGroup, FgabHom]:
    """``neg`` and ``id`` act on ``A``; ``swap`` exchanges the summands of ``A + A``.

    Raises:
        ValueError: For an unknown involution name
    """
    if name == "neg":
        return a, FgabHom.identity(a).scaled(-1)
    if name == "id":
        return a, FgabHom.identity(a)
    if name == "swap":
        summed = direct_sum([a, a])
        rows = []
        for x in summed.group.gens():
            left, right = summed.unpack(x)
            rows.append(summed.pack([right, left]))
        return summed.group, FgabHom(summed.group, summed.group, rows)
    raise ValueError(f"unknown involution '{name}' (expected neg, id or swap)")


def from_abelian(a: FgAbelianGroup, label: Optional[str] = None) -> SquareGroup:
    """``(A --0--> 0 --0--> A)``."""
    e = Nil2Datum.abelian(a)
    ee = FgAbelianGroup.trivial()
    return SquareGroup(
        e, ee, CentralHom.zero(ee, e), QuadraticMap.zero(e, ee),
        kind="abelian", label=label or str(a), params={"group": a},
    )


def free_sq(names: Sequence[str], ee_names: Sequence[str] = ()) -> SquareGroup:
    """The free square group ``V(S) x (Z[T])^(x)``."""
    names, ee_names = tuple(names), tuple(ee_names)
    result = product(v_free(names), a_tensor(FgAbelianGroup.free(len(ee_names), list(ee_names)))).square
    result.kind = "free"
    result.label = "F(" + ",".join(names) + ";" + ",".join(ee_names) + ")"
    result.params = {"names": names, "ee_names": ee_names}
    return result


def free_cover(m: SquareGroup) -> SgMorphism:
    """The epimorphism ``V(word gens of M_e) x (Z[gens of M_ee])^(x) -> M``.

    ``s`` goes to its word generator, ``t`` to its ee-generator ``g(t)``
    through ``f_e(a) = P g(a)`` and ``f_ee(a, b) = g(a) + T g(b)``.
    """
    words = m.e.word_gens()
    s_names = tuple(f"x{i}" for i in range(len(words)))
    t_names = tuple(f"a{j}" for j in range(m.ee.rank))
    v = v_free(s_names)
    a = a_tensor(FgAbelianGroup.free(len(t_names), list(t_names)))
    prod = product(v, a)
    cover = prod.square
    k = len(words)

    v_e = [words[i] for i in range(k)] + [m.P(m.H(x)) for x in words]
    fv_e = Nil2Hom.from_lattice_images(v.e, m.e, v_e)
    fv_ee_rows = [m.H(x) for x in words]
    fv_ee_rows += [m.cross(x, y) for x in words for y in words]
    fv_ee_rows += [m.H(m.P(m.H(x))) for x in words]
    fv = SgMorphism(v, m, fv_e, FgabHom(v.ee, m.ee, fv_ee_rows))

    g_rows = list(m.ee.gens())
    fa_e = Nil2Hom(a.e, m.e, [m.P(g) for g in g_rows])
    summed = a.params["sum"]
    fa_ee_rows = []
    for x in a.ee.gens():
        left, right = summed.unpack(x)
        left_img = m.ee.combine(list(zip(left, g_rows)))
        right_img = m.ee.combine(list(zip(right, g_rows)))
        fa_ee_rows.append(m.ee.add(left_img, m.T(right_img)))
    fa = SgMorphism(a, m, fa_e, FgabHom(a.ee, m.ee, fa_ee_rows))

    left_e, right_e = prod.projections[0].fe, prod.projections[1].fe
    e_images = [fv.fe(left_e(w)) + fa.fe(right_e(w)) for w in cover.e.word_gens()]
    ee_rows = [
        m.ee.add(fv.fee(prod.projections[0].fee(x)), fa.fee(prod.projections[1].fee(x)))
        for x in cover.ee.gens()
    ]
    f = SgMorphism.from_images(cover, m, e_images, ee_rows)
    logger.debug(f"free cover of {m.label}: {k} e-generators, {len(t_names)} ee-generators")
    return f


def a_tensor_map(f: FgabHom, source: Optional[SquareGroup] = None, target: Optional[SquareGroup] = None) -> SgMorphism:
    """``f^(x): A^(x) -> B^(x)``, ``f`` on the e-level and ``f + f`` on the ee-level."""
    source = source or a_tensor(f.source)
    target = target or a_tensor(f.target)
    s_sum, t_sum = source.params["sum"], target.params["sum"]
    ee_rows = []
    for x in source.ee.gens():
        left, right = s_sum.unpack(x)
        ee_rows.append(t_sum.pack([f(left), f(right)]))
    e_images = [target.e.element(list(f(w.v))) for w in source.word_gens()]
    return SgMorphism.from_images(source, target, e_images, ee_rows)
