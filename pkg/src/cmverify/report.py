"""Check reports and the machine-readable output document."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .symcore import Expr

VERSION = "0.1.0"

PASS = "pass"
FAIL = "fail"
NEEDS_INPUT = "needs-input"
DEGENERATE = "degenerate"


@dataclass
class CheckReport:
    check_id: str
    verdict: str
    residual_symbolic: str = "0"
    residual_sampled_max: float | None = None
    notes: str = ""

    def line(self) -> str:
        parts = [f"[{self.verdict.upper():>11}] {self.check_id}"]
        if self.residual_symbolic not in ("", "0"):
            parts.append(f"residual = {self.residual_symbolic}")
        if self.residual_sampled_max is not None:
            parts.append(f"max|sampled| = {self.residual_sampled_max:.3e}")
        if self.notes:
            parts.append(self.notes)
        return "  ".join(parts)


def residual_check(check_id, residuals, sampler=None, notes="",
                   pass_notes="") -> CheckReport:
    """Verdict from a list of (label, Expr) residuals: pass iff every one is
    identically zero.  The first nonzero residual is rendered, labelled."""
    worst = None
    for label, e in residuals:
        if not e.is_zero:
            worst = (label, e)
            break
    sampled = None
    if sampler is not None:
        sampled = sampler.max_abs([e for _, e in residuals])
    if worst is None:
        return CheckReport(check_id, PASS, "0", sampled, pass_notes or notes)
    label, e = worst
    shown = str(e)
    if label:
        shown = f"{label}: {shown}"
    return CheckReport(check_id, FAIL, shown, sampled, notes)


@dataclass
class ReportDocument:
    spec_path: str
    spec_hash: str
    checks: list = field(default_factory=list)
    solutions: dict | None = None
    classification: str | None = None

    def add(self, report: CheckReport):
        self.checks.append(report)

    def extend(self, reports):
        self.checks.extend(reports)

    def counts(self):
        out = {PASS: 0, FAIL: 0, NEEDS_INPUT: 0, DEGENERATE: 0}
        for c in self.checks:
            out[c.verdict] = out.get(c.verdict, 0) + 1
        return out

    def exit_code(self) -> int:
        return 2 if any(c.verdict == FAIL for c in self.checks) else 0

    def to_json(self) -> str:
        checks = []
        for c in self.checks:
            checks.append({
                "id": c.check_id,
                "verdict": c.verdict,
                "residual_symbolic": c.residual_symbolic,
                "residual_sampled_max": c.residual_sampled_max,
                "notes": c.notes,
            })
        doc = {
            "version": VERSION,
            "spec_hash": self.spec_hash,
            "checks": checks,
            "solutions": self.solutions,
            "classification": self.classification,
        }
        return json.dumps(doc, sort_keys=True, separators=(", ", ": "),
                          indent=2)

    def to_text(self) -> str:
        lines = [f"manifold file: {self.spec_path}  (sha256 {self.spec_hash[:12]})"]
        for c in self.checks:
            lines.append(c.line())
        if self.solutions is not None:
            lines.append("solutions:")
            for key, val in self.solutions.items():
                if isinstance(val, (list, tuple)):
                    val = "(" + ", ".join(val) + ")"
                elif val is None:
                    val = "indeterminate"
                lines.append(f"  {key} = {val}")
        if self.classification is not None:
            lines.append(f"classification: {self.classification}")
        n = self.counts()
        lines.append(
            f"summary: {n[PASS]} pass, {n[FAIL]} fail, "
            f"{n[NEEDS_INPUT]} needs-input, {n[DEGENERATE]} degenerate")
        return "\n".join(lines)


def file_hash(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def render_oneform(omega) -> list:
    return [str(c) for c in omega.components]


def render_value(v) -> str:
    if v is None:
        return "indeterminate"
    if isinstance(v, Expr):
        return str(v)
    return str(v)
