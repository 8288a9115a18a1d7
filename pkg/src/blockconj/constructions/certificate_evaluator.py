"""
CertificateEvaluator (LangGraph node)
- Receives state containing:
    state["A"], state["B"] : the automorphisms being compared
    state["verdict"]       : Conjugate / TwoBlockOnly / NotBlockConjugate

- Re-checks every certificate from plain integer rows: its own matrix
  products and a sympy determinant, nothing from the construction modules.
- Output stored in state["evaluation"]
"""

import logging
from typing import Dict, List, Sequence

from sympy import Matrix

logger = logging.getLogger(__name__)

Rows = List[List[int]]


def _matmul(a: Rows, b: Rows) -> Rows:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _direct_sum(blocks: Sequence[Rows]) -> Rows:
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            for j, v in enumerate(row):
                out[offset + i][offset + j] = v
        offset += len(block)
    return out


def _rows(m) -> Rows:
    if hasattr(m, "tolist"):
        m = m.tolist()
    return [[int(v) for v in row] for row in m]


class CertificateEvaluator:
    def __init__(self, debug: bool = False):
        self.debug = debug

    def evaluate(self, left: Rows, conjugator: Rows, right_blocks: Sequence[Rows]) -> Dict:
        """(left ⊕ ... ⊕ left)·M = M·(right_1 ⊕ ... ⊕ right_k) with det M = ±1."""
        left, conjugator = _rows(left), _rows(conjugator)
        right_blocks = [_rows(b) for b in right_blocks]
        issues = []

        n, k = len(left), len(right_blocks)
        size = n * k
        shape_ok = (
            n > 0
            and k > 0
            and all(len(row) == n for row in left)
            and all(len(b) == n and all(len(r) == n for r in b) for b in right_blocks)
            and len(conjugator) == size
            and all(len(row) == size for row in conjugator)
        )
        if not shape_ok:
            return {"approved": False, "determinant": None, "issues": ["shape mismatch"]}

        determinant = int(Matrix(conjugator).det(method="bareiss"))
        if abs(determinant) != 1:
            issues.append(f"det = {determinant}, expected ±1")

        lhs = _matmul(_direct_sum([left] * k), conjugator)
        rhs = _matmul(conjugator, _direct_sum(right_blocks))
        if lhs != rhs:
            issues.append("intertwining identity fails")

        charpoly = Matrix(left).charpoly().all_coeffs()
        if any(Matrix(b).charpoly().all_coeffs() != charpoly for b in right_blocks):
            issues.append("right block with a different characteristic polynomial")

        result = {"approved": not issues, "determinant": determinant, "issues": issues}
        if self.debug:
            logger.debug("[CertificateEvaluator] → %s", result)
        return result

    def evaluate_conjugacy(self, A: Rows, B: Rows, P: Rows) -> Dict:
        """P·A = B·P with det P = ±1."""
        return self.evaluate(B, P, [A])

    def __call__(self, state: dict):
        verdict = state.get("verdict")
        A, B = state["A"], state["B"]
        checks = []

        witness = getattr(verdict, "witness", None)
        if witness is not None:
            checks.append(self.evaluate_conjugacy(A.mat, B.mat, witness))
        for cert in getattr(verdict, "certificates", ()):
            checks.append(self.evaluate(cert.left.mat, cert.M, [b.mat for b in cert.right_blocks]))

        result = {
            "approved": all(c["approved"] for c in checks),
            "checked": len(checks),
            "issues": [issue for c in checks for issue in c["issues"]],
        }
        return {"evaluation": result}
