"""Models for verification reports and run configuration."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, Protocol

from mashumaro import field_options
from mashumaro.config import BaseConfig
from mashumaro.mixins.orjson import DataClassORJSONMixin
import orjson

SCHEMA_VERSION = 1


class CheckStatus(StrEnum):
    """Check status."""

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class OutputFormat(StrEnum):
    """Output format."""

    JSON = "json"
    TEXT = "text"


class Residual(Protocol):
    """Anything a check can compare against zero and print."""

    @property
    def is_zero(self) -> bool:
        """Return whether the residual vanishes."""


@dataclass
class ResidualEntry(DataClassORJSONMixin):
    """Residual of a single checked case."""

    case: str
    status: CheckStatus
    residual: str | None = None

    class Config(BaseConfig):
        """Mashumaro configuration."""

        omit_none = True


@dataclass
class CheckReport(DataClassORJSONMixin):
    """Outcome of one named check over a window."""

    check: str
    status: CheckStatus
    window: dict[str, int] = field(default_factory=dict)
    entries: list[ResidualEntry] = field(default_factory=list)
    observed: dict[str, int] | None = None
    expected: dict[str, int] | None = None
    reference: str | None = None
    convention: str | None = None
    details: dict[str, list[str]] | None = None
    reason: str | None = None
    timing: float | None = field(default=None, metadata=field_options(alias="timing_s"))

    class Config(BaseConfig):
        """Mashumaro configuration."""

        omit_none = True
        serialize_by_alias = True

    @property
    def passed(self) -> bool:
        """Return whether the check did not fail."""
        return self.status is not CheckStatus.FAIL

    @classmethod
    def from_residuals(
        cls,
        check: str,
        residuals: Iterable[tuple[str, Residual]],
        *,
        window: dict[str, int] | None = None,
        **kwargs: Any,
    ) -> CheckReport:
        """Build a report whose status is pass iff every residual is zero."""
        entries = [
            ResidualEntry(case, CheckStatus.PASS)
            if residual.is_zero
            else ResidualEntry(case, CheckStatus.FAIL, str(residual))
            for case, residual in residuals
        ]
        status = (
            CheckStatus.FAIL
            if any(entry.status is CheckStatus.FAIL for entry in entries)
            else CheckStatus.PASS
        )
        return cls(check, status, window or {}, entries, **kwargs)

    @classmethod
    def from_dimensions(
        cls,
        check: str,
        observed: dict[str, int],
        *,
        expected: dict[str, int] | None = None,
        window: dict[str, int] | None = None,
        **kwargs: Any,
    ) -> CheckReport:
        """Build a report whose status is pass iff the declared expectation holds."""
        failed = expected is not None and any(
            observed.get(key) != value for key, value in expected.items()
        )
        return cls(
            check,
            CheckStatus.FAIL if failed else CheckStatus.PASS,
            window or {},
            observed=observed,
            expected=expected,
            **kwargs,
        )

    @classmethod
    def merge(
        cls, check: str, reports: Iterable[CheckReport], *, window: dict[str, int] | None = None
    ) -> CheckReport:
        """Concatenate the entries of per-case reports into one check."""
        entries = [entry for report in reports for entry in report.entries]
        status = (
            CheckStatus.FAIL
            if any(entry.status is CheckStatus.FAIL for entry in entries)
            else CheckStatus.PASS
        )
        return cls(check, status, window or {}, entries)

    @classmethod
    def skipped(cls, check: str, reason: str, **kwargs: Any) -> CheckReport:
        """Build a report for a check that was not run."""
        return cls(check, CheckStatus.SKIPPED, reason=reason, **kwargs)


@dataclass
class SuiteReport(DataClassORJSONMixin):
    """Checks of one suite."""

    suite: str
    status: CheckStatus
    checks: list[CheckReport] = field(default_factory=list)

    @classmethod
    def from_checks(cls, suite: str, checks: list[CheckReport]) -> SuiteReport:
        """Aggregate the status of a list of checks."""
        status = (
            CheckStatus.PASS
            if all(check.passed for check in checks)
            else CheckStatus.FAIL
        )
        return cls(suite, status, checks)


@dataclass
class Report(DataClassORJSONMixin):
    """Top-level report of a run."""

    command: str
    status: CheckStatus
    suites: list[SuiteReport] = field(default_factory=list)
    schema: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        """Return whether every suite passed."""
        return self.status is not CheckStatus.FAIL

    @property
    def exit_code(self) -> int:
        """Return 0 when nothing failed, 1 otherwise."""
        return 0 if self.passed else 1

    @classmethod
    def from_suites(cls, command: str, suites: list[SuiteReport]) -> Report:
        """Aggregate suites, ordered by suite name."""
        ordered = sorted(suites, key=lambda suite: suite.suite)
        status = (
            CheckStatus.PASS
            if all(suite.status is not CheckStatus.FAIL for suite in ordered)
            else CheckStatus.FAIL
        )
        return cls(command, status, ordered)

    def render_json(self) -> str:
        """Render canonical JSON terminated by a newline."""
        return (
            self.to_json(orjson_options=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)
            + "\n"
        )

    def render_text(self) -> str:
        """Render a plain text summary."""
        lines = [f"{self.command}: {self.status}"]
        for suite in self.suites:
            lines.append(f"  {suite.suite}: {suite.status}")
            for check in suite.checks:
                window = ", ".join(f"{key}={value}" for key, value in check.window.items())
                lines.append(f"    {check.check} [{window}]: {check.status}")
                if check.observed is not None:
                    observed = ", ".join(
                        f"{key}={value}" for key, value in sorted(check.observed.items())
                    )
                    lines.append(f"      {observed}")
                if check.reason:
                    lines.append(f"      {check.reason}")
                lines.extend(
                    f"      {entry.case}: {entry.residual}"
                    for entry in check.entries
                    if entry.status is CheckStatus.FAIL
                )
        return "\n".join(lines) + "\n"


@dataclass
class RunConfig(DataClassORJSONMixin):
    """Configuration of a command-line run."""

    command: str
    preset: str = "block"
    spec_path: str | None = None
    module_spec_path: str | None = None
    window: int = 3
    degree: int = 5
    q: int = 2
    max_index: int = 4
    coefficients: str = "trivial"
    reduced: bool = False
    check: str | None = None
    output_path: str | None = None
    output_format: OutputFormat = OutputFormat.JSON
    stable: bool = False
    verbose: bool = False
