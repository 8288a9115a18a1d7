import json

from sympy import ImmutableMatrix, Rational

from blockconj.tools.ideal_arith import FracIdeal
from blockconj.tools.number_field import FieldElem, MinPoly, format_elem


def to_plain(value):
    """Convert matrices, field elements and ideals into JSON-ready values."""
    if isinstance(value, ImmutableMatrix):
        return [[int(v) if v.is_integer else str(v) for v in value.row(i)] for i in range(value.rows)]
    if isinstance(value, FieldElem):
        return format_elem(value)
    if isinstance(value, FracIdeal):
        return {"den": value.den, "basis": [list(r) for r in value.basis]}
    if isinstance(value, MinPoly):
        return list(value.coeffs)
    if isinstance(value, Rational):
        return int(value) if value.is_integer else str(value)
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    return value


class Transcript:
    """
    Stores one CLI run:
        - titled sections of results, in order
        - named checks with pass/fail
        - errors surfaced with module provenance
    """

    def __init__(self, command: str):
        self.command = command
        self.sections = []
        self.checks = []
        self.errors = []

    def add(self, title: str, payload: dict):
        self.sections.append({"title": title, "payload": to_plain(payload)})

    def check(self, name: str, passed: bool, detail=None):
        self.checks.append({"name": name, "passed": bool(passed), "detail": to_plain(detail)})

    def error(self, err: Exception):
        self.errors.append(str(err))

    @property
    def success(self) -> bool:
        return not self.errors and all(c["passed"] for c in self.checks)

    def render(self, fmt: str = "text") -> str:
        if fmt == "structured":
            return self.render_structured()
        return self.render_text()

    def render_structured(self) -> str:
        data = {
            "command": self.command,
            "sections": self.sections,
            "checks": self.checks,
            "errors": self.errors,
            "success": self.success,
        }
        return json.dumps(data, sort_keys=True, indent=2)

    def render_text(self) -> str:
        lines = []
        for section in self.sections:
            lines.append(f"== {section['title']} ==")
            for key, value in section["payload"].items():
                lines.extend(_text_field(key, value))
        for c in self.checks:
            lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}")
        for e in self.errors:
            lines.append(f"ERROR {e}")
        return "\n".join(lines) + "\n"


def _is_matrix(value) -> bool:
    return (
        isinstance(value, list)
        and value
        and all(isinstance(row, list) and row and all(isinstance(v, (int, str)) for v in row) for row in value)
    )


def _text_field(key, value):
    if _is_matrix(value):
        out = [f"{key}: {len(value)} {len(value[0])}"]
        out.extend("  " + " ".join(str(v) for v in row) for row in value)
        return out
    if isinstance(value, dict):
        return [f"{key}: {json.dumps(value, sort_keys=True)}"]
    return [f"{key}: {value}"]
