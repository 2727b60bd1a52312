"""Command-line interface for squaregroups."""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

from . import registry
from .boxcomp import box, psg_compat_report, sigma_report
from .checks import CheckReport
from .coherence import verify_hexagons, verify_pentagon, verify_symmetry, verify_triangle, verify_units
from .config import RunConfig, VerificationConfig, threads_from_env
from .cosym import CosymmetryObject, cos_validate, cosymmetry, is_sg_sigma, j_report
from .document import SqDocument, parse_document
from .homotopy import spectrum_report, tor1_report
from .limits import coproduct
from .qrings import QuadraticRing, monoid_ring, psi, psi_report, qr_to_sr, validate_qring, validate_sqring
from .report import FORMATS, emit_report, exit_status
from .sqcore import SquareGroup, validate_square_group
from .suite import AREAS, run_suite
from .tensor import tensor, tensor_relations_report
from .utils import SquareGroupError, UnresolvedReferenceError, set_package_level, setup_logger
from .zalgebra import FgAbelianGroup, FgabHom


logger = setup_logger(__name__)


# Commands that may not appear as document check lines.
TOP_LEVEL_ONLY = ("validate", "suite")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per computation."""
    parser = argparse.ArgumentParser(
        prog="squaregroups",
        description="squaregroups - exact computations with square groups and their tensor product",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Derived invariants of Z_nil
  squaregroups invariants znil

  # Homotopy groups of the spectrum in degrees 0..3
  squaregroups homotopy znil --max 3

  # Objects and checks from a document, machine-readable output
  squaregroups --document fixtures.sq --format machine validate

  # The full acceptance run on four threads
  squaregroups --threads 4 suite --output suite.json
        """
    )

    input_group = parser.add_argument_group("Input")
    input_group.add_argument(
        "--document",
        type=str,
        help="Document declaring objects and checks (names resolve here before the registry)"
    )

    output_group = parser.add_argument_group("Output Configuration")
    output_group.add_argument(
        "--format",
        type=str,
        choices=list(FORMATS),
        default="text",
        help="Report format (default: text)"
    )

    output_group.add_argument(
        "--output",
        "-o",
        type=str,
        help="Output file path (default: print to stdout)"
    )

    output_group.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Enable verbose logging"
    )

    run_group = parser.add_argument_group("Execution")
    run_group.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (default: SQUAREGROUPS_THREADS or 1)"
    )

    run_group.add_argument(
        "--enumeration-limit",
        type=int,
        default=VerificationConfig.enumeration_limit,
        help=f"Largest search space enumerated by Hom counting (default: {VerificationConfig.enumeration_limit})"
    )

    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    validate = commands.add_parser("validate", help="Validate objects (and run document checks)")
    validate.add_argument("names", nargs="*", help="Square groups to validate (default: all)")

    for name, text in (
        ("tensor", "The tensor product M (.) N"),
        ("box", "The composition product M [] N and sigma"),
        ("coproduct", "The coproduct M v N"),
    ):
        sub = commands.add_parser(name, help=text)
        sub.add_argument("left")
        sub.add_argument("right")

    invariants = commands.add_parser("invariants", help="T, Delta, Coker(P), k and cross-effect membership")
    invariants.add_argument("square")

    coherence = commands.add_parser("coherence", help="Coherence laws of the symmetric monoidal structure")
    laws = coherence.add_mutually_exclusive_group(required=True)
    laws.add_argument("--pentagon", nargs=4, metavar="M")
    laws.add_argument("--hexagon", nargs=3, metavar="M")
    laws.add_argument("--triangle", nargs=2, metavar="M")
    laws.add_argument("--symmetry", nargs=2, metavar="M")
    laws.add_argument("--unit", nargs=1, metavar="M")

    homotopy = commands.add_parser("homotopy", help="Homotopy groups of the spectrum of (-) (.) M")
    homotopy.add_argument("square")
    homotopy.add_argument("--max", type=int, default=None, help="Top degree (default: 4)")

    tor1 = commands.add_parser("tor1", help="Tor_1(A^(x), M) with its resolution cross-check")
    tor1.add_argument("group", help="Declared abelian group or invariant factors such as 2,3")
    tor1.add_argument("square")

    ring_validate = commands.add_parser("ring-validate", help="Quadratic ring axioms and the square ring U(R)")
    ring_validate.add_argument("ring", help="Registry ring or declared monoid")

    psi_cmd = commands.add_parser("psi", help="The quadratic map psi of a commutative quadratic ring")
    psi_cmd.add_argument("ring")

    roundtrip = commands.add_parser("cosym-roundtrip", help="Cosymmetry law, J and Psi")
    roundtrip.add_argument("cosymmetry", help="Registry cosymmetry object or declared abelian group")

    suite = commands.add_parser("suite", help="Full acceptance run")
    suite.add_argument("--area", action="append", choices=sorted(AREAS), help="Restrict to an area (repeatable)")

    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments.

    Returns:
        Parsed arguments
    """
    return build_parser().parse_args(argv)


# ---------------------------------------------------------------------------
# Name resolution


class Context:
    """Resolves names against the document first, then the registry."""

    def __init__(self, doc: Optional[SqDocument] = None, config: Optional[RunConfig] = None):
        self.doc = doc or SqDocument()
        self.config = config or RunConfig()

    def _declared(self, name: str, kind: str):
        if self.doc.kind_of(name) == kind:
            return self.doc.objects[name]
        return None

    def square(self, name: str) -> SquareGroup:
        found = self._declared(name, "square")
        return found if found is not None else registry.square(name)

    def abelian(self, text: str) -> FgAbelianGroup:
        found = self._declared(text, "abelian")
        if found is not None:
            return found
        try:
            return FgAbelianGroup.diagonal([int(d) for d in text.split(",")])
        except ValueError:
            raise UnresolvedReferenceError(text)

    def ring(self, name: str) -> QuadraticRing:
        monoid = self._declared(name, "monoid")
        if monoid is not None:
            return monoid_ring(monoid)
        return registry.ring(name)

    def cosymmetry(self, name: str) -> CosymmetryObject:
        group = self._declared(name, "abelian")
        if group is not None:
            return cosymmetry(group, label=f"({name}, 0)")
        return registry.cosymmetry_object(name)


def _rows(f: FgabHom) -> str:
    return str([list(row) for row in f.rows])


def _in_pool(thunks: Sequence[Callable[[], CheckReport]], threads: int) -> List[CheckReport]:
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda run: run(), thunks))


# ---------------------------------------------------------------------------
# Commands


def _validate_square(name: str, m: SquareGroup) -> CheckReport:
    report = CheckReport(title=f"validate {name}")
    report.merge(validate_square_group(m))
    if report.ok:
        report.merge(m.derived.check_report())
    report.summary.update(m.summary())
    return report


def cmd_validate(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    if args.names:
        names = list(args.names)
    elif ctx.doc.declarations:
        names = list(ctx.doc.squares())
    else:
        names = registry.square_names()
    thunks = [lambda n=n: _validate_square(n, ctx.square(n)) for n in names]
    for decl in ctx.doc.declarations:
        if decl.kind == "monoid":
            thunks.append(lambda n=decl.name: validate_qring(ctx.ring(n)))
    if not args.names:
        for check in ctx.doc.checks:
            thunks.append(lambda c=check: _document_check(c.command, c.args, c.line, ctx))
    return _in_pool(thunks, ctx.config.threads)


def _document_check(command: str, argv: Sequence[str], line: int, ctx: Context) -> CheckReport:
    title = f"line {line}: {command} {' '.join(argv)}".rstrip()
    report = CheckReport(title=title)
    if command in TOP_LEVEL_ONLY:
        report.skip(f"{command}", f"'{command}' cannot run from a document")
        return report
    for sub in run_command(command, argv, ctx.doc, ctx.config):
        report.merge(sub)
    return report


def cmd_tensor(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    tp = tensor(ctx.square(args.left), ctx.square(args.right))
    report = CheckReport(title=f"{args.left} (.) {args.right}")
    report.merge(tensor_relations_report(tp))
    report.summary.update(tp.result.summary())
    return [report]


def cmd_box(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    m, n = ctx.square(args.left), ctx.square(args.right)
    result = box(m, n)
    report = CheckReport(title=f"{args.left} [] {args.right}")
    report.merge(psg_compat_report(m, n))
    report.merge(sigma_report(m, n))
    report.summary.update(result.summary())
    return [report]


def cmd_coproduct(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    cp = coproduct(ctx.square(args.left), ctx.square(args.right))
    report = CheckReport(title=f"{args.left} v {args.right}")
    report.merge(validate_square_group(cp.square))
    report.summary.update(cp.square.summary())
    return [report]


def cmd_invariants(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    m = ctx.square(args.square)
    d = m.derived
    report = CheckReport(title=f"invariants of {args.square}")
    report.merge(d.check_report())
    report.summary.update({
        "T": _rows(d.T),
        "Delta": _rows(d.delta),
        "coker": str(d.coker.group),
        "ker_pbar": str(d.ker_pbar),
        "k": _rows(d.k),
        "k.nonzero": str(not d.k.is_zero()),
        "sg_sigma": str(is_sg_sigma(m)),
    })
    return [report]


def cmd_coherence(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    if args.pentagon:
        return [verify_pentagon(*(ctx.square(n) for n in args.pentagon))]
    if args.hexagon:
        return [verify_hexagons(*(ctx.square(n) for n in args.hexagon))]
    if args.triangle:
        return [verify_triangle(*(ctx.square(n) for n in args.triangle))]
    if args.symmetry:
        return [verify_symmetry(*(ctx.square(n) for n in args.symmetry))]
    return [verify_units(ctx.square(args.unit[0]))]


def cmd_homotopy(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    top = ctx.config.max_degree if args.max is None else args.max
    if top < 0:
        raise ValueError(f"--max must be non-negative, got {top}")
    return [spectrum_report(ctx.square(args.square), top=max(top, 1))]


def cmd_tor1(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    return [tor1_report(ctx.abelian(args.group), ctx.square(args.square))]


def cmd_ring_validate(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    r = ctx.ring(args.ring)
    return [validate_qring(r), validate_sqring(qr_to_sr(r))]


def cmd_psi(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    r = ctx.ring(args.ring)
    report = psi_report(r)
    if report.ok:
        f = psi(r)
        report.summary["psi.codomain"] = str(f.codomain)
        for g in f.derived.coker.group.gens():
            report.summary[f"psi({list(g)})"] = str(list(f(g)))
    return [report]


def cmd_cosym_roundtrip(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    x = ctx.cosymmetry(args.cosymmetry)
    return [cos_validate(x), j_report(x)]


def cmd_suite(args: argparse.Namespace, ctx: Context) -> List[CheckReport]:
    return run_suite(threads=ctx.config.threads, areas=args.area, config=ctx.config.verification)


COMMANDS = {
    "validate": cmd_validate,
    "tensor": cmd_tensor,
    "box": cmd_box,
    "coproduct": cmd_coproduct,
    "invariants": cmd_invariants,
    "coherence": cmd_coherence,
    "homotopy": cmd_homotopy,
    "tor1": cmd_tor1,
    "ring-validate": cmd_ring_validate,
    "psi": cmd_psi,
    "cosym-roundtrip": cmd_cosym_roundtrip,
    "suite": cmd_suite,
}


def run_command(
    command: str,
    argv: Sequence[str] = (),
    doc: Optional[SqDocument] = None,
    config: Optional[RunConfig] = None,
) -> List[CheckReport]:
    """Run one subcommand and return its reports.

    Args:
        command: Subcommand name
        argv: Its arguments, as on the command line
        doc: Parsed document to resolve names against
        config: Run configuration

    Returns:
        Reports in emission order

    Raises:
        ValueError: For an unknown command or bad arguments
    """
    if command not in COMMANDS:
        raise ValueError(f"unknown command '{command}' (expected one of {sorted(COMMANDS)})")
    try:
        args = build_parser().parse_args([command, *argv])
    except SystemExit:
        raise ValueError(f"bad arguments for '{command}': {' '.join(argv)}")
    ctx = Context(doc, config)
    logger.debug(f"running {command} {' '.join(argv)}")
    return COMMANDS[command](args, ctx)


def main(argv: Optional[Sequence[str]] = None):
    """Main CLI entry point."""
    args = parse_args(argv)

    # Set up logging
    if args.verbose:
        set_package_level(logging.DEBUG)

    try:
        threads = args.threads if args.threads is not None else threads_from_env(1)
        config = RunConfig(
            threads=threads,
            output_format=args.format,
            verification=VerificationConfig(enumeration_limit=args.enumeration_limit),
        )
        config.validate()

        doc = None
        if args.document:
            with open(args.document, "r", encoding="utf-8") as f:
                doc = parse_document(f.read())
            logger.info(f"loaded {len(doc.declarations)} declarations from {args.document}")

        ctx = Context(doc, config)
        reports = COMMANDS[args.command](args, ctx)
        text = emit_report(reports, config.output_format)

        if args.output:
            with open(args.output, "w", encoding="utf-8") as f:
                f.write(text)
            logger.info(f"report written to {args.output}")
        else:
            sys.stdout.write(text)

    except KeyboardInterrupt:
        print("\n\nRun interrupted by user.", file=sys.stderr)
        sys.exit(1)
    except (SquareGroupError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        sys.exit(1)

    sys.exit(exit_status(reports))


if __name__ == "__main__":
    main()
