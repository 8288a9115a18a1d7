import json
import os
from typing import List, Optional

from pydantic import BaseModel, ValidationError

from blockconj.errors import InputError
from blockconj.tools.exact_linalg import det
from blockconj.tools.number_field import format_elem


class CertificateRecord(BaseModel):
    """(left ⊕ ... ⊕ left)·conjugator = conjugator·(right_blocks[0] ⊕ ...)."""

    left: List[List[int]]
    conjugator: List[List[int]]
    right_blocks: List[List[List[int]]]
    minpoly: List[int]
    determinant: int
    generators: Optional[List[str]] = None
    label: str = ""


def _rows(m) -> List[List[int]]:
    return [[int(v) for v in m.row(i)] for i in range(m.rows)]


def record_from_certificate(cert, label: str = "") -> CertificateRecord:
    return CertificateRecord(
        left=_rows(cert.left.mat),
        conjugator=_rows(cert.M),
        right_blocks=[_rows(b.mat) for b in cert.right_blocks],
        minpoly=list(cert.left.f.coeffs),
        determinant=int(det(cert.M)),
        generators=[format_elem(g) for g in cert.generators] if cert.generators else None,
        label=label,
    )


def load_records(text: str) -> List[CertificateRecord]:
    """Records of a store file's JSON text; InputError on anything else."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"unreadable certificate store: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("certificates", []), list):
        raise InputError("certificate store must be an object with a 'certificates' list")
    try:
        return [CertificateRecord.model_validate(c) for c in data.get("certificates", [])]
    except ValidationError as exc:
        raise InputError(f"unreadable certificate store: {exc}") from exc


class CertificateStore:
    """
    Certificates saved to disk as JSON.
    Written by `certify --out`; `verify` reads it back through load_records.
    """

    def __init__(self, path: str):
        self.path = path
        if not os.path.exists(self.path):
            self._save({"certificates": []})

    def add(self, record: CertificateRecord):
        data = self._load()
        data["certificates"].append(record.model_dump())
        self._save(data)

    def _load(self):
        with open(self.path, "r") as f:
            return json.load(f)

    def _save(self, data):
        with open(self.path, "w") as f:
            json.dump(data, f, indent=2, sort_keys=True)
