"""Findings and line-oriented report rendering.

Every validator in the package returns a :class:`Report`.  Machine output is
one tab-separated record per finding; ``human()`` gives a prose rendering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ERROR = "error"
WARNING = "warning"
INFO = "info"

_SEVERITY_ORDER = {ERROR: 0, WARNING: 1, INFO: 2}


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    path: str
    detail: str = ""

    def line(self) -> str:
        return "\t".join((self.severity.upper(), self.code, self.path, _clean(self.detail)))


def _clean(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ")


@dataclass
class Report:
    """An ordered collection of findings produced by one validation run."""

    findings: list[Finding] = field(default_factory=list)

    def add(self, severity, code, path, detail=""):
        self.findings.append(Finding(severity, code, path, detail))

    def error(self, code, path, detail=""):
        self.add(ERROR, code, path, detail)

    def warning(self, code, path, detail=""):
        self.add(WARNING, code, path, detail)

    def info(self, code, path, detail=""):
        self.add(INFO, code, path, detail)

    def extend(self, other: "Report") -> None:
        self.findings.extend(other.findings)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == ERROR]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == WARNING]

    def codes(self, severity=None) -> list[str]:
        return [f.code for f in self.findings if severity is None or f.severity == severity]

    @property
    def ok(self) -> bool:
        return not self.errors

    def __len__(self):
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)

    def lines(self) -> list[str]:
        return [f.line() for f in self.findings]

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines())

    def human(self) -> str:
        if not self.findings:
            return "No findings.\n"
        out = []
        for f in sorted(self.findings, key=lambda f: _SEVERITY_ORDER.get(f.severity, 3)):
            detail = f": {f.detail}" if f.detail else ""
            out.append(f"[{f.severity}] {f.path} ({f.code}){detail}")
        n_err, n_warn = len(self.errors), len(self.warnings)
        out.append(f"{n_err} error(s), {n_warn} warning(s)")
        return "\n".join(out) + "\n"


def tsv(rows) -> str:
    """Render rows of cells as tab-separated lines."""
    return "".join("\t".join(str(c) for c in row) + "\n" for row in rows)
