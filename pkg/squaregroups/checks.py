"""Check outcomes shared by every validator."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

from .utils import ValidationError, setup_logger


logger = setup_logger(__name__)


class CheckStatus(str, Enum):
    """Outcome of a single check."""

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass
class CheckResult:
    """One named check with its outcome.

    Attributes:
        name: Check name, dotted (e.g. "sg.php")
        status: Outcome
        witness: Printable witness of a failure (or reason for a skip)
        detail: Free-form summary for reports
    """

    name: str
    status: CheckStatus
    witness: Optional[str] = None
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass
class CheckReport:
    """Ordered collection of check results.

    Attributes:
        title: Report heading
        results: Check results in insertion order
        summary: Structural summary lines (invariant factors, ranks, ...)
    """

    title: str = ""
    results: List[CheckResult] = field(default_factory=list)
    summary: Dict[str, str] = field(default_factory=dict)

    def add(self, name: str, ok: bool, witness: Any = None, detail: Optional[str] = None) -> bool:
        """Record a pass/fail check.

        Args:
            name: Check name
            ok: Whether the check passed
            witness: Witness to record on failure
            detail: Optional detail text

        Returns:
            ``ok``, so callers can chain on it
        """
        status = CheckStatus.PASS if ok else CheckStatus.FAIL
        text = None if ok or witness is None else str(witness)
        self.results.append(CheckResult(name, status, text, detail))
        if not ok:
            logger.warning(f"check {name} failed: {text}")
        return ok

    def skip(self, name: str, reason: str) -> None:
        self.results.append(CheckResult(name, CheckStatus.SKIPPED, reason))

    def merge(self, other: "CheckReport", prefix: str = "") -> "CheckReport":
        for result in other.results:
            name = f"{prefix}{result.name}" if prefix else result.name
            self.results.append(CheckResult(name, result.status, result.witness, result.detail))
        for key, value in other.summary.items():
            self.summary[f"{prefix}{key}" if prefix else key] = value
        return self

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if r.status is CheckStatus.FAIL]

    @property
    def skipped(self) -> List[CheckResult]:
        return [r for r in self.results if r.status is CheckStatus.SKIPPED]

    @property
    def ok(self) -> bool:
        return not self.failures

    def first_failure(self) -> Optional[CheckResult]:
        failures = self.failures
        return failures[0] if failures else None

    def raise_for_failure(self) -> None:
        """Raise ValidationError for the first failed check, if any.

        Raises:
            ValidationError: If any check failed
        """
        failure = self.first_failure()
        if failure is not None:
            raise ValidationError(
                f"{self.title or 'validation'}: {failure.name} failed"
                + (f" (witness: {failure.witness})" if failure.witness else ""),
                check=failure.name,
                witness=failure.witness,
            )

    def sorted(self) -> "CheckReport":
        """Return a copy with results in deterministic (name) order."""
        return CheckReport(
            title=self.title,
            results=sorted(self.results, key=lambda r: r.name),
            summary=dict(sorted(self.summary.items())),
        )

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "ok": self.ok,
            "results": [r.to_dict() for r in self.results],
            "summary": dict(self.summary),
        }


def combine(title: str, reports: Iterable[CheckReport]) -> CheckReport:
    """Concatenate reports under a single title."""
    combined = CheckReport(title=title)
    for report in reports:
        combined.merge(report)
    return combined
