"""The acceptance suite: every law checked on the registry, run in a thread pool."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement, islice, product as cartesian
from typing import Callable, List, Optional, Sequence, Tuple

from . import registry
from .boxcomp import box_unit_report, psg_compat_report, sigma_report
from .checks import CheckReport
from .closed_forms import (
    abelian_closure_report,
    tensor_ab_sq,
    tensor_atensor,
    tensor_qz,
    tensor_vn,
    tensor_zq,
    znil_monoidal,
)
from .coherence import verify_hexagons, verify_pentagon, verify_symmetry, verify_triangle, verify_units
from .config import VerificationConfig
from .constructors import a_tensor, a_tensor_map, from_abelian
from .cosym import cos_obstruction_report, j_report, monoidal_report, products_report
from .exactness import coproduct_sequence_report, product_preservation_report, right_exactness_report
from .homotopy import homotopy_groups, les_check, spectrum_report, tor1_report
from .limits import hom_count_checks
from .qrings import psi, psi_report, qr_to_sr, validate_qring, validate_sqring
from .sqcore import SgMorphism, n_star_report, validate_square_group
from .tensor import tensor
from .utils import SquareGroupError, setup_logger
from .zalgebra import FgAbelianGroup, FgabHom, FgabTensor


logger = setup_logger(__name__)


@dataclass
class SuiteCase:
    """One independent unit of work.

    Attributes:
        name: Dotted case name; the suite output is sorted by it
        run: Builds the case report
    """

    name: str
    run: Callable[[], CheckReport]


def cyclic_sequence(k: int) -> Tuple[SgMorphism, SgMorphism]:
    """``Z^(x) --k--> Z^(x) --> (Z/k)^(x)``."""
    z = FgAbelianGroup.free(1)
    zk = FgAbelianGroup.cyclic(k)
    source, middle = a_tensor(z), a_tensor(z)
    i = a_tensor_map(FgabHom.from_generator_images(z, z, [[k]]), source, middle)
    p = a_tensor_map(FgabHom.from_generator_images(z, zk, [[1]]), middle, a_tensor(zk))
    return i, p


# ---------------------------------------------------------------------------
# Case builders, one per acceptance area


def _axiom_case(name: str) -> CheckReport:
    m = registry.square(name)
    report = CheckReport(title=f"axioms of {name}")
    report.merge(validate_square_group(m))
    report.merge(m.derived.check_report())
    report.merge(n_star_report(m))
    return report


def axiom_cases() -> List[SuiteCase]:
    return [SuiteCase(f"axioms.{n}", lambda n=n: _axiom_case(n)) for n in registry.square_names()]


def unit_cases() -> List[SuiteCase]:
    return [
        SuiteCase(f"units.{n}", lambda n=n: verify_units(registry.square(n)))
        for n in registry.square_names()
    ]


COHERENCE_POOL = ("znil", "abelian_z2", "atensor_z2", "zq")


def coherence_cases() -> List[SuiteCase]:
    sq = registry.square
    cases = []
    for combo in islice(combinations_with_replacement(COHERENCE_POOL, 4), 20):
        cases.append(SuiteCase("coherence.pentagon." + "_".join(combo),
                               lambda c=combo: verify_pentagon(*(sq(x) for x in c))))
    for combo in combinations_with_replacement(COHERENCE_POOL, 3):
        cases.append(SuiteCase("coherence.hexagon." + "_".join(combo),
                               lambda c=combo: verify_hexagons(*(sq(x) for x in c))))
    for a, b in cartesian(registry.SMALL, repeat=2):
        cases.append(SuiteCase(f"coherence.triangle.{a}_{b}", lambda a=a, b=b: verify_triangle(sq(a), sq(b))))
        cases.append(SuiteCase(f"coherence.symmetry.{a}_{b}", lambda a=a, b=b: verify_symmetry(sq(a), sq(b))))
    return cases


CLASSICAL_ORDERS = (0, 2, 3, 4, 6)


def _classical_case(m: int, n: int) -> CheckReport:
    a = FgAbelianGroup.free(1) if m == 0 else FgAbelianGroup.cyclic(m)
    b = FgAbelianGroup.free(1) if n == 0 else FgAbelianGroup.cyclic(n)
    left, right = from_abelian(a), from_abelian(b)
    result = tensor(left, right, strategy="presented").result
    expected = FgabTensor(a, b).group
    report = CheckReport(title=f"classical {a} (x) {b}")
    got = result.e.abelianization.group
    report.add("classical.e", got.isomorphic(expected), None, f"{got} vs {expected}")
    report.add("classical.ee", result.ee.is_trivial(), str(result.ee))
    report.merge(abelian_closure_report(left, right))
    return report


def classical_cases() -> List[SuiteCase]:
    cases = [
        SuiteCase(f"classical.tensor.{m}_{n}", lambda m=m, n=n: _classical_case(m, n))
        for m, n in combinations_with_replacement(CLASSICAL_ORDERS, 2)
    ]
    for k in (2, 4):
        for name in ("znil", "atensor_z2", "zq"):
            cases.append(SuiteCase(
                f"classical.tor1.z{k}_{name}",
                lambda k=k, name=name: tor1_report(FgAbelianGroup.cyclic(k), registry.square(name)),
            ))
    return cases


def closed_form_cases() -> List[SuiteCase]:
    sq = registry.square
    z, z2 = FgAbelianGroup.free(1), FgAbelianGroup.cyclic(2)
    return [
        SuiteCase("closed.atensor.z_znil_s", lambda: tensor_atensor(z, sq("znil_s")).report()),
        SuiteCase("closed.atensor.z2_zq", lambda: tensor_atensor(z2, sq("zq")).report()),
        SuiteCase("closed.atensor.z2_znil", lambda: tensor_atensor(z2, sq("znil")).report()),
        SuiteCase("closed.zq.abelian_z2", lambda: tensor_zq(sq("abelian_z2")).report()),
        SuiteCase("closed.zq.atensor_z", lambda: tensor_zq(sq("atensor_z")).report()),
        SuiteCase("closed.vn.1_znil", lambda: tensor_vn(1, sq("znil")).report()),
        SuiteCase("closed.vn.2_atensor_z2", lambda: tensor_vn(2, sq("atensor_z2")).report()),
        SuiteCase("closed.ab_sq.atensor_z2_zq", lambda: tensor_ab_sq(sq("atensor_z2"), sq("zq")).report()),
        SuiteCase("closed.qz.atensor_z2_abelian_z", lambda: tensor_qz(sq("atensor_z2"), sq("abelian_z")).report()),
        SuiteCase("closed.znil.st_uvw", lambda: znil_monoidal(["s", "t"], ["u", "v", "w"]).report()),
    ]


def _right_exact_case(name: str, k: int) -> CheckReport:
    i, p = cyclic_sequence(k)
    return right_exactness_report(registry.square(name), i, p)


def _les_case(name: str) -> CheckReport:
    i, p = cyclic_sequence(2)
    return les_check(i, p, registry.square(name))


def exactness_cases() -> List[SuiteCase]:
    sq = registry.square
    cases = [
        SuiteCase(f"exactness.right.{n}_{k}", lambda n=n, k=k: _right_exact_case(n, k))
        for n, k in (("znil", 2), ("zq", 2), ("atensor_z2", 2), ("znil_s", 3), ("abelian_z2", 4))
    ]
    for m, b, c in (
        ("znil", "atensor_z2", "abelian_z2"),
        ("zq", "znil", "atensor_z"),
        ("atensor_z2", "znil", "zq"),
        ("e_neg_z", "abelian_z", "atensor_z2"),
        ("znil_s", "abelian_z2", "znil"),
    ):
        cases.append(SuiteCase(f"exactness.product.{m}_{b}_{c}",
                               lambda m=m, b=b, c=c: product_preservation_report(sq(m), sq(b), sq(c))))
    for m, a, b in (("znil", "znil", "znil"), ("atensor_z2", "znil", "abelian_z2"), ("zq", "abelian_z2", "abelian_z")):
        cases.append(SuiteCase(f"exactness.coproduct.{m}_{a}_{b}",
                               lambda m=m, a=a, b=b: coproduct_sequence_report(sq(m), sq(a), sq(b))))
    for n in ("znil", "atensor_z", "atensor_z2"):
        cases.append(SuiteCase(f"exactness.les.{n}", lambda n=n: _les_case(n)))
    return cases


def _sigma_witness() -> CheckReport:
    report = CheckReport(title="sigma outside the cross-effect subcategory")
    outside = sigma_report(registry.square("atensor_z"), registry.square("atensor_z"))
    report.summary.update(outside.summary)
    report.add("sigma.non_iso_witness", outside.summary["sigma.iso"] == "False", "sigma is an isomorphism")
    return report


def _sigma_inside(a: str, b: str) -> CheckReport:
    report = products_report(registry.square(a), registry.square(b))
    report.merge(sigma_report(registry.square(a), registry.square(b)))
    return report


def box_cases() -> List[SuiteCase]:
    sq = registry.square
    cases = [SuiteCase(f"box.units.{n}", lambda n=n: box_unit_report(sq(n))) for n in registry.SMALL]
    for a, b in (("znil", "atensor_z2"), ("atensor_z2", "znil_s"), ("zq", "abelian_z2")):
        cases.append(SuiteCase(f"box.psg.{a}_{b}", lambda a=a, b=b: psg_compat_report(sq(a), sq(b))))
    for a, b in (("znil", "znil"), ("znil", "znil_s"), ("znil_s", "j_z3")):
        cases.append(SuiteCase(f"box.sigma.{a}_{b}", lambda a=a, b=b: _sigma_inside(a, b)))
    cases.append(SuiteCase("box.sigma.witness", _sigma_witness))
    return cases


def _znil_homotopy() -> CheckReport:
    report = CheckReport(title="homotopy of Z_nil")
    pis = [str(g) for g in homotopy_groups(registry.square("znil"), 3)]
    report.add("homotopy.znil_values", pis == ["Z", "Z/2", "0", "Z/2"], pis)
    pis = [str(g) for g in homotopy_groups(registry.square("atensor_z"), 3)]
    report.add("homotopy.atensor_z_zero", pis == ["0"] * 4, pis)
    return report


def homotopy_cases() -> List[SuiteCase]:
    cases = [SuiteCase("homotopy.values", _znil_homotopy)]
    cases += [
        SuiteCase(f"homotopy.spectrum.{n}", lambda n=n: spectrum_report(registry.square(n)))
        for n in registry.square_names()
    ]
    return cases


def _ring_case(name: str) -> CheckReport:
    r = registry.ring(name)
    report = CheckReport(title=f"ring {name}")
    report.merge(validate_qring(r))
    report.merge(validate_sqring(qr_to_sr(r)))
    report.merge(psi_report(r))
    return report


def _psi_two() -> CheckReport:
    report = CheckReport(title="psi on Z_nil")
    f = psi(registry.ring("znil_ring"))
    value = list(f([2]))
    report.add("psi.two", str(f.codomain) == "Z/2" and value == [1], value)
    return report


def ring_cases() -> List[SuiteCase]:
    cases = [SuiteCase(f"rings.{n}", lambda n=n: _ring_case(n)) for n in sorted(registry.RINGS)]
    cases.append(SuiteCase("rings.psi_two", _psi_two))
    return cases


def _obstruction() -> CheckReport:
    report = CheckReport(title="cosymmetries on Z/2")
    found = cos_obstruction_report(FgAbelianGroup.cyclic(2))
    report.summary.update(found.summary)
    report.add("cos.z2_obstructed", not found.ok, "a cosymmetry on Z/2 was found")
    return report


def cosym_cases() -> List[SuiteCase]:
    cos = registry.cosymmetry_object
    cases = [SuiteCase(f"cosym.j.{n}", lambda n=n: j_report(cos(n))) for n in sorted(registry.COSYMMETRIES)]
    for a, b in (("unit", "free_s"), ("free_s", "free_s"), ("free_s", "z3")):
        cases.append(SuiteCase(f"cosym.monoidal.{a}_{b}", lambda a=a, b=b: monoidal_report(cos(a), cos(b))))
    cases.append(SuiteCase("cosym.obstruction", _obstruction))
    return cases


def hom_cases(config: VerificationConfig) -> List[SuiteCase]:
    return [
        SuiteCase(f"homs.{n}", lambda n=n: hom_count_checks(registry.square(n), config))
        for n in ("abelian_z2", "atensor_z2")
    ]


AREAS = {
    "axioms": axiom_cases,
    "units": unit_cases,
    "coherence": coherence_cases,
    "classical": classical_cases,
    "closed": closed_form_cases,
    "exactness": exactness_cases,
    "box": box_cases,
    "homotopy": homotopy_cases,
    "rings": ring_cases,
    "cosym": cosym_cases,
    "homs": hom_cases,
}

# Areas whose builders take the verification settings.
CONFIGURED = ("homs",)


def suite_cases(
    areas: Optional[Sequence[str]] = None,
    config: Optional[VerificationConfig] = None,
) -> List[SuiteCase]:
    """Cases for the requested areas (all by default).

    Raises:
        ValueError: For an unknown area
    """
    config = config or VerificationConfig()
    selected = list(AREAS) if areas is None else list(areas)
    unknown = [a for a in selected if a not in AREAS]
    if unknown:
        raise ValueError(f"unknown suite area(s) {unknown} (expected some of {sorted(AREAS)})")
    cases = []
    for area in selected:
        cases.extend(AREAS[area](config) if area in CONFIGURED else AREAS[area]())
    return cases


def run_case(case: SuiteCase) -> CheckReport:
    """Run one case; library errors become a failed check instead of aborting the suite."""
    try:
        report = case.run()
    except (SquareGroupError, ValueError) as e:
        logger.warning(f"suite case {case.name} raised {type(e).__name__}: {e}")
        report = CheckReport()
        report.add("error", False, f"{type(e).__name__}: {e}")
    report.title = case.name
    return report


def run_suite(
    threads: int = 1,
    areas: Optional[Sequence[str]] = None,
    config: Optional[VerificationConfig] = None,
) -> List[CheckReport]:
    """Run the suite and return one report per case, sorted by case name.

    Args:
        threads: Worker threads
        areas: Areas to run (all by default)
        config: Verification settings

    Returns:
        Reports in case-name order

    Raises:
        ValueError: For a bad thread count, area or configuration
    """
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")
    config = config or VerificationConfig()
    config.validate()
    cases = suite_cases(areas, config)
    logger.info(f"running {len(cases)} suite cases on {threads} thread(s)")
    if threads > 1:
        registry.build_all()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        reports = list(pool.map(run_case, cases))
    failed = sum(1 for r in reports if not r.ok)
    logger.info(f"suite finished: {len(reports) - failed} passed, {failed} failed")
    return sorted(reports, key=lambda r: r.title)
