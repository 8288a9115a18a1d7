"""
Command-line front end.

Wire formats:
    matrix      first line "rows cols", then one line of integers per row
    polynomial  "deg c0 c1 ... c_deg", constant term first, monic
Blank lines and lines starting with '#' are ignored.
"""

import logging
import os
from pathlib import Path
from typing import List, Literal, NamedTuple, Optional, Tuple

import coloredlogs
import typer
from pydantic import BaseModel, Field, ValidationError, model_validator

from blockconj import config, fixtures
from blockconj.constructions.block_conjugacy import (
    Conjugate,
    TwoBlockOnly,
    construct_two_block,
    decide,
    verify_block_certificate,
)
from blockconj.constructions.certificate_evaluator import CertificateEvaluator
from blockconj.constructions.lmt_correspondence import Automorphism, ideal_to_matrix, matrix_to_ideal
from blockconj.constructions.tori_galois import check_E_membership_inverse_criterion, galois_of_xi
from blockconj.errors import InputError, ToralError, exit_code_for
from blockconj.memory.certificate_store import CertificateStore, load_records, record_from_certificate
from blockconj.memory.transcript import Transcript
from blockconj.tools.exact_linalg import IntMat, det, direct_sum, identity, int_matrix
from blockconj.tools.ideal_arith import (
    coefficient_ring,
    ideal_mul,
    is_invertible,
    is_weakly_equivalent,
    power_order,
)
from blockconj.tools.number_field import FieldElem, MinPoly

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 3


# =========================================
# WIRE FORMAT
# =========================================

def _content_lines(text: str) -> List[str]:
    lines = (line.strip() for line in text.splitlines())
    return [line for line in lines if line and not line.startswith("#")]


def _ints(tokens: List[str]) -> List[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError as exc:
        raise InputError(f"non-integer token in {' '.join(tokens)!r}") from exc


def _read_matrix(lines: List[str], start: int) -> Tuple[IntMat, int]:
    header = _ints(lines[start].split())
    if len(header) != 2 or header[0] < 1 or header[1] < 1:
        raise InputError(f"bad matrix header {lines[start]!r}, expected 'rows cols'")
    rows, cols = header
    body = lines[start + 1:start + 1 + rows]
    if len(body) != rows:
        raise InputError(f"expected {rows} rows, found {len(body)}")
    data = [_ints(line.split()) for line in body]
    if any(len(row) != cols for row in data):
        raise InputError(f"every row must have {cols} entries")
    return int_matrix(data), start + 1 + rows


def parse_matrix(text: str) -> IntMat:
    """
    Examples:
        "2 2\\n8 5\\n3 2" -> [[8,5],[3,2]]
    """
    lines = _content_lines(text)
    if not lines:
        raise InputError("no matrix found")
    m, end = _read_matrix(lines, 0)
    if end != len(lines):
        raise InputError("trailing lines after the matrix")
    return m


def parse_matrices(text: str) -> List[IntMat]:
    """A stream of consecutive wire-format matrices."""
    lines = _content_lines(text)
    matrices, position = [], 0
    while position < len(lines):
        m, position = _read_matrix(lines, position)
        matrices.append(m)
    return matrices


def emit_matrix(m: IntMat) -> str:
    rows = [" ".join(str(int(m[i, j])) for j in range(m.cols)) for i in range(m.rows)]
    return f"{m.rows} {m.cols}\n" + "\n".join(rows) + "\n"


def parse_polynomial(text: str, assume_irreducible: bool = False) -> MinPoly:
    lines = _content_lines(text)
    if len(lines) != 1:
        raise InputError("polynomial must be a single line 'deg c0 ... c_deg'")
    values = _ints(lines[0].split())
    deg, coeffs = values[0], values[1:]
    if deg < 2 or len(coeffs) != deg + 1:
        raise InputError(f"expected degree >= 2 followed by {deg + 1} coefficients")
    if coeffs[-1] != 1:
        raise InputError("polynomial must be monic")
    return MinPoly.from_coeffs(coeffs, assume_irreducible=assume_irreducible)


def emit_polynomial(coeffs) -> str:
    return f"{len(coeffs) - 1} " + " ".join(str(c) for c in coeffs) + "\n"


def _looks_like_polynomial(text: str) -> bool:
    lines = _content_lines(text)
    return len(lines) == 1 and len(lines[0].split()) > 2


# =========================================
# JOBS
# =========================================

class JobSpec(BaseModel):
    command: Literal["analyze", "decide", "certify", "verify", "fixtures"]
    inputs: List[str] = []
    bound: int = Field(default=config.DEFAULT_BOUND, ge=1)
    seed: int = config.DEFAULT_SEED
    fmt: Literal["text", "structured"] = "text"
    assume_irreducible: bool = False
    batch: bool = False
    out: Optional[str] = None

    @model_validator(mode="after")
    def _check_inputs(self):
        expected = {"analyze": 1, "decide": 1 if self.batch else 2, "certify": 2, "verify": 1, "fixtures": 0}
        if len(self.inputs) != expected[self.command]:
            raise ValueError(f"{self.command} takes {expected[self.command]} input(s), got {len(self.inputs)}")
        return self


class JobResult(NamedTuple):
    output: str
    exit_code: int


def _automorphism(m: IntMat, job: JobSpec) -> Automorphism:
    return Automorphism.from_matrix(m, assume_irreducible=job.assume_irreducible)


def _run_analyze(job: JobSpec, t: Transcript) -> int:
    text = job.inputs[0]
    if _looks_like_polynomial(text):
        f = parse_polynomial(text, job.assume_irreducible)
        t.add("polynomial", {"f": str(f), "coeffs": f.coeffs, "irreducibility": f.irreducibility, "unit": f.unit_flag})
        A, _ = ideal_to_matrix(power_order(f))
    else:
        A = _automorphism(parse_matrix(text), job)

    eig = matrix_to_ideal(A)
    ring = coefficient_ring(eig.ideal)
    t.add("matrix", {"A": A.mat, "charpoly": str(A.f), "coeffs": A.f.coeffs, "irreducibility": A.f.irreducibility})
    t.add("ideal", {"eigenvector": eig.u, "den": eig.ideal.den, "hnf": [list(r) for r in eig.ideal.basis]})
    t.add("coefficient ring", {
        "den": ring.den,
        "hnf": [list(r) for r in ring.basis],
        "is Z[beta]": ring == power_order(A.f),
    })
    t.add("invertibility", {"invertible": is_invertible(eig.ideal)})
    back, _ = ideal_to_matrix(eig.ideal, basis=eig.u)
    t.check("beta on the eigenvector basis reproduces A", back.mat == A.mat)
    return EXIT_OK


def _certificate_payload(cert) -> dict:
    payload = {
        "left": cert.left.mat,
        "M": cert.M,
        "det": det(cert.M),
        "max |entry|": max(abs(int(v)) for v in cert.M),
        "right blocks": [b.mat for b in cert.right_blocks],
    }
    if cert.generators is not None:
        payload["generators"] = list(cert.generators)
    return payload


def _pairs(job: JobSpec) -> List[Tuple[IntMat, IntMat]]:
    if not job.batch:
        return [(parse_matrix(job.inputs[0]), parse_matrix(job.inputs[1]))]
    matrices = parse_matrices(job.inputs[0])
    if not matrices or len(matrices) % 2:
        raise InputError("batch file must hold an even, nonzero number of matrices")
    return [(matrices[i], matrices[i + 1]) for i in range(0, len(matrices), 2)]


def _run_decide(job: JobSpec, t: Transcript) -> int:
    evaluator = CertificateEvaluator()
    pairs = _pairs(job)
    undetermined = 0
    for index, (a, b) in enumerate(pairs, start=1):
        A, B = _automorphism(a, job), _automorphism(b, job)
        result = decide(A, B, bound=job.bound, seed=job.seed)
        payload = {"verdict": result.describe(), "bound": result.bound_used}
        verdict = result.verdict
        if isinstance(verdict, Conjugate):
            payload["P"] = verdict.witness
            t.check(f"pair {index}: P·A = B·P, det ±1",
                    evaluator.evaluate_conjugacy(A.mat, B.mat, verdict.witness)["approved"])
        elif isinstance(verdict, TwoBlockOnly):
            undetermined += 1
            for number, cert in enumerate(verdict.certificates, start=1):
                payload[f"certificate {number}"] = _certificate_payload(cert)
                check = evaluator.evaluate(cert.left.mat, cert.M, [r.mat for r in cert.right_blocks])
                t.check(f"pair {index}: certificate {number} verifies", check["approved"])
        t.add(f"pair {index}" if job.batch else "decision", payload)
    return EXIT_INCONCLUSIVE if undetermined == len(pairs) else EXIT_OK


def _run_certify(job: JobSpec, t: Transcript) -> int:
    evaluator = CertificateEvaluator()
    A = _automorphism(parse_matrix(job.inputs[0]), job)
    B = _automorphism(parse_matrix(job.inputs[1]), job)
    certificates = construct_two_block(A, B, job.seed)
    store = CertificateStore(job.out) if job.out else None
    for number, cert in enumerate(certificates, start=1):
        t.add(f"certificate {number}", _certificate_payload(cert))
        check = evaluator.evaluate(cert.left.mat, cert.M, [r.mat for r in cert.right_blocks])
        t.check(f"certificate {number} verifies", check["approved"])
        if store is not None:
            store.add(record_from_certificate(cert, label=f"certificate {number}"))
    return EXIT_OK


def _load_records(text: str) -> List[Tuple]:
    if text.lstrip().startswith(("{", "[")):
        records = load_records(text)
        # raw rows; the evaluator reports ragged or mismatched shapes itself
        return [(r.left, r.conjugator, r.right_blocks) for r in records]
    matrices = parse_matrices(text)
    if len(matrices) < 3:
        raise InputError("expected the left block, the conjugator and at least one right block")
    return [(matrices[0], matrices[1], matrices[2:])]


def _run_verify(job: JobSpec, t: Transcript) -> int:
    evaluator = CertificateEvaluator()
    records = _load_records(job.inputs[0])
    if not records:
        raise InputError("no certificates to verify")
    for number, (left, M, right) in enumerate(records, start=1):
        result = evaluator.evaluate(left, M, right)
        t.add(f"certificate {number}", {"det": result["determinant"], "issues": result["issues"]})
        t.check(f"certificate {number} verifies", result["approved"])
    return EXIT_OK


def _run_fixtures(job: JobSpec, t: Transcript) -> int:
    A, B = fixtures.quadratic_pair()
    first, second = fixtures.quadratic_certificates()
    t.add("quadratic pair", {"f": str(A.f), "M": first.M, "N": second.M})
    t.check("quadratic M verifies with det 1", verify_block_certificate(first) and det(first.M) == 1)
    t.check("quadratic N verifies with det -1", verify_block_certificate(second) and det(second.M) == -1)
    generators = fixtures.quadratic_generators(A.f)
    t.check("a1·b1 + a2·b2 = 1",
            generators.a1 * generators.b1 + generators.a2 * generators.b2 == FieldElem.one(A.f))

    B_inv, xi = fixtures.inverse_pair()
    element = galois_of_xi(xi, B_inv)
    t.add("inverse pair", {"B": B_inv.mat, "xi": xi, "galois": list(element.p)})
    t.check("(B ⊕ B)·xi = xi·(B^-1 ⊕ B^-1)", check_E_membership_inverse_criterion(xi, B_inv))
    t.check("xi^2 = I", xi * xi == identity(4))

    cubic_A, cubic_B = fixtures.cubic_pair()
    embed = int_matrix(fixtures.CUBIC_EMBED)
    t.add("cubic pair", {"A": cubic_A.mat, "B": cubic_B.mat, "embed": embed})
    t.check("(B ⊕ B)·embed = embed·A", direct_sum(cubic_B.mat, 2) * embed == embed * cubic_A.mat)
    t.check("cubic ideals not weakly equivalent", not is_weakly_equivalent(
        matrix_to_ideal(cubic_A).ideal, matrix_to_ideal(cubic_B).ideal))

    fixture = fixtures.non_invertible()
    t.add("non-invertible ideal", {"R0": fixture.R0, "R": fixture.R, "I": fixture.I})
    t.check("I^2 = Z[theta]", ideal_mul(fixture.I, fixture.I) == fixture.R0)

    if job.out:
        os.makedirs(job.out, exist_ok=True)
        written = []
        for name, rows in fixtures.wire_fixtures().items():
            Path(job.out, f"{name}.txt").write_text(emit_matrix(int_matrix(rows)))
            written.append(f"{name}.txt")
        for name, coeffs in (("quadratic_f", fixtures.QUADRATIC_F), ("inverse_f", fixtures.INVERSE_F),
                             ("cubic_f", fixtures.CUBIC_F), ("theta_cubic", fixtures.THETA_CUBIC),
                             ("theta_quartic", fixtures.THETA_QUARTIC)):
            Path(job.out, f"{name}.txt").write_text(emit_polynomial(coeffs))
            written.append(f"{name}.txt")
        t.add("files", {"directory": job.out, "written": sorted(written)})
    return EXIT_OK


_COMMANDS = {
    "analyze": _run_analyze,
    "decide": _run_decide,
    "certify": _run_certify,
    "verify": _run_verify,
    "fixtures": _run_fixtures,
}


def run(job: JobSpec) -> JobResult:
    """Run one job; errors become transcript entries with their exit code."""
    transcript = Transcript(job.command)
    try:
        code = _COMMANDS[job.command](job, transcript)
    except ToralError as err:
        logger.debug("[cli] → %s failed: %s", job.command, err)
        transcript.error(err)
        code = exit_code_for(err)
    if code in (EXIT_OK, EXIT_INCONCLUSIVE) and not transcript.success:
        code = 1
    return JobResult(transcript.render(job.fmt), code)


# =========================================
# TYPER APPLICATION
# =========================================

app = typer.Typer(help="Exact block-conjugacy decisions for irreducible toral automorphisms.", add_completion=False)

FormatOption = typer.Option(config.OUTPUT_FORMAT, "--format", help="text or structured")
BoundOption = typer.Option(config.DEFAULT_BOUND, "--bound", help="search bound for conjugacy")
SeedOption = typer.Option(config.DEFAULT_SEED, "--seed")
IrreducibleOption = typer.Option(False, "--assume-irreducible", help="skip the irreducibility check")


@app.callback()
def main(debug: bool = typer.Option(False, "--debug", help="debug logging")):
    coloredlogs.install(level="DEBUG" if debug else config.LOG_LEVEL)


def _execute(command: str, paths: List[Path], **options):
    try:
        texts = [p.read_text() for p in paths]
        job = JobSpec(command=command, inputs=texts, **options)
    except (OSError, ValidationError) as exc:
        typer.echo(f"[cli] {exc}", err=True)
        raise typer.Exit(2)
    result = run(job)
    typer.echo(result.output, nl=False)
    raise typer.Exit(result.exit_code)


@app.command()
def analyze(
    source: Path = typer.Argument(..., help="matrix or polynomial file"),
    fmt: str = FormatOption,
    assume_irreducible: bool = IrreducibleOption,
):
    """Charpoly, ideal, coefficient ring and invertibility of one matrix."""
    _execute("analyze", [source], fmt=fmt, assume_irreducible=assume_irreducible)


@app.command(name="decide")
def decide_command(
    a: Optional[Path] = typer.Argument(None),
    b: Optional[Path] = typer.Argument(None),
    batch: Optional[Path] = typer.Option(None, "--batch", help="file of consecutive matrix pairs"),
    bound: int = BoundOption,
    seed: int = SeedOption,
    fmt: str = FormatOption,
    assume_irreducible: bool = IrreducibleOption,
):
    """Conjugate, two-block conjugate only, or not block conjugate."""
    paths = [batch] if batch else [p for p in (a, b) if p is not None]
    _execute("decide", paths, batch=batch is not None, bound=bound, seed=seed, fmt=fmt,
             assume_irreducible=assume_irreducible)


@app.command()
def certify(
    a: Path,
    b: Path,
    out: Optional[Path] = typer.Option(None, "--out", help="JSON certificate store to append to"),
    seed: int = SeedOption,
    fmt: str = FormatOption,
    assume_irreducible: bool = IrreducibleOption,
):
    """Two-block certificates for a weakly equivalent pair."""
    _execute("certify", [a, b], out=str(out) if out else None, seed=seed, fmt=fmt,
             assume_irreducible=assume_irreducible)


@app.command()
def verify(certificate: Path, fmt: str = FormatOption):
    """Re-check certificates by direct multiplication."""
    _execute("verify", [certificate], fmt=fmt)


@app.command(name="fixtures")
def fixtures_command(
    out: Optional[Path] = typer.Option(None, "--out", help="directory for wire-format fixture files"),
    fmt: str = FormatOption,
):
    """Check every worked example and optionally write it out."""
    _execute("fixtures", [], out=str(out) if out else None, fmt=fmt)
