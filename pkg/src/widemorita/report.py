"""Check reports with reproducible witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class Finding:
    name: str
    status: str
    witness: dict | None = None
    info: dict | None = None
    # lhs - rhs of a failed (or passed) equation; kept in memory, never serialized
    difference: object = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.info:
            out["info"] = self.info
        return out


def diff_witness(lhs, rhs, cell: str | None = None) -> dict | None:
    """First differing entry of two matrices (row-major), or ``None`` if equal."""
    if lhs.shape != rhs.shape:
        return {"cell": cell, "reason": "shape", "lhs_shape": list(lhs.shape), "rhs_shape": list(rhs.shape)}
    neq = np.argwhere(lhs.a != rhs.a)
    if neq.size == 0:
        return None
    r, c = (int(v) for v in neq[0])
    fmt = lhs.field.format
    w = {"row": r, "col": c, "lhs": fmt(lhs.a[r, c]), "rhs": fmt(rhs.a[r, c])}
    if cell is not None:
        w = {"cell": cell, **w}
    return w


class Report:
    """Ordered collection of named findings."""

    def __init__(self, subject: str = ""):
        self.subject = subject
        self.findings: list[Finding] = []

    def ok(self, name: str, info: dict | None = None):
        self.findings.append(Finding(name, PASS, None, info))
        return self

    def fail(self, name: str, witness: dict, info: dict | None = None, difference=None):
        self.findings.append(Finding(name, FAIL, witness, info, difference))
        return self

    def error(self, name: str, message: str):
        self.findings.append(Finding(name, ERROR, {"message": message}))
        return self

    def compare(self, name: str, lhs, rhs, cell: str | None = None, info=None) -> bool:
        """Record an exact matrix equation ``lhs == rhs``."""
        w = diff_witness(lhs, rhs, cell or name)
        diff = lhs - rhs if lhs.shape == rhs.shape else None
        if w is None:
            self.findings.append(Finding(name, PASS, None, info, diff))
            return True
        self.findings.append(Finding(name, FAIL, w, info, diff))
        return False

    def extend(self, other: "Report", prefix: str = ""):
        for f in other.findings:
            self.findings.append(
                Finding(prefix + f.name, f.status, f.witness, f.info, f.difference)
            )
        return self

    def get(self, name: str) -> Finding:
        for f in self.findings:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(f.status == PASS for f in self.findings)

    @property
    def failures(self) -> list[Finding]:
        return [f for f in self.findings if f.status != PASS]

    def names(self) -> list[str]:
        return [f.name for f in self.findings]

    def __bool__(self):
        return self.passed

    def __repr__(self):
        bad = ", ".join(f.name for f in self.failures)
        state = "pass" if self.passed else f"fail [{bad}]"
        return f"Report({self.subject}: {state})"

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "status": PASS if self.passed else (ERROR if any(f.status == ERROR for f in self.findings) else FAIL),
            "checks": [f.to_dict() for f in self.findings],
        }
