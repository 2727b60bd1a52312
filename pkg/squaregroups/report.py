"""Text and machine emission of check reports."""

import json
from typing import Any, Dict, List, Sequence

from .checks import CheckReport, CheckStatus
from .utils import setup_logger


logger = setup_logger(__name__)


REPORT_SCHEMA = "squaregroups-report/1"
FORMATS = ("text", "machine")


def _mark(status: CheckStatus) -> str:
    return {CheckStatus.PASS: "PASS", CheckStatus.FAIL: "FAIL", CheckStatus.SKIPPED: "SKIP"}[status]


def emit_text(reports: Sequence[CheckReport]) -> str:
    """Human-readable rendering, one block per report."""
    lines: List[str] = []
    for report in reports:
        report = report.sorted()
        lines.append(f"== {report.title or 'report'} ==")
        for key, value in report.summary.items():
            lines.append(f"  {key}: {value}")
        for result in report.results:
            line = f"  [{_mark(result.status)}] {result.name}"
            if result.witness is not None:
                line += f" ({result.witness})"
            if result.detail and result.status is not CheckStatus.PASS:
                line += f" - {result.detail}"
            lines.append(line)
        if report.results:
            lines.append(
                f"  {len(report.results)} checks, {len(report.failures)} failed, {len(report.skipped)} skipped"
            )
    return "\n".join(lines) + ("\n" if lines else "")


def machine_document(reports: Sequence[CheckReport]) -> Dict[str, Any]:
    return {
        "schema": REPORT_SCHEMA,
        "ok": all(report.ok for report in reports),
        "reports": [report.sorted().to_dict() for report in reports],
    }


def emit_machine(reports: Sequence[CheckReport]) -> str:
    """JSON rendering with sorted keys; identical reports give identical bytes."""
    return json.dumps(machine_document(reports), sort_keys=True, indent=2) + "\n"


def emit_report(reports: Sequence[CheckReport], fmt: str = "text") -> str:
    """Render reports in ``fmt``.

    Args:
        reports: Reports in the order they should appear
        fmt: "text" or "machine"

    Returns:
        The rendered document

    Raises:
        ValueError: For an unknown format
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format '{fmt}' (expected one of {FORMATS})")
    if isinstance(reports, CheckReport):
        reports = [reports]
    logger.debug(f"emitting {len(reports)} report(s) as {fmt}")
    return emit_text(reports) if fmt == "text" else emit_machine(reports)


def exit_status(reports: Sequence[CheckReport]) -> int:
    """0 iff no check failed; skipped checks do not fail a run."""
    return 0 if all(report.ok for report in reports) else 1
