import json

import pytest
from pydantic import ValidationError
from typer.testing import CliRunner

from blockconj import fixtures
from blockconj.cli import (
    JobSpec,
    app,
    emit_matrix,
    emit_polynomial,
    parse_matrices,
    parse_matrix,
    parse_polynomial,
    run,
)
from blockconj.errors import InputError, ReducibleError
from blockconj.memory.certificate_store import CertificateStore, load_records, record_from_certificate
from blockconj.tools.exact_linalg import int_matrix

runner = CliRunner()


def _wire(rows):
    return emit_matrix(int_matrix(rows))


@pytest.fixture
def wire_dir(tmp_path):
    for name, rows in fixtures.wire_fixtures().items():
        (tmp_path / f"{name}.txt").write_text(_wire(rows))
    return tmp_path


# =========================
# WIRE FORMAT
# =========================
def test_parse_matrix():
    text = "# quadratic A\n2 2\n\n8 5\n3 2\n"
    assert parse_matrix(text) == int_matrix([[8, 5], [3, 2]])
    assert emit_matrix(parse_matrix(text)) == "2 2\n8 5\n3 2\n"


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2\n8 5\n3 2",
        "2 2\n8 5",
        "2 2\n8 5\n3 x",
        "2 2\n8 5 1\n3 2",
        "2 2\n8 5\n3 2\n1 1",
    ],
)
def test_parse_matrix_rejects_malformed(text):
    with pytest.raises(InputError):
        parse_matrix(text)


def test_parse_matrices():
    text = _wire(fixtures.QUADRATIC_A) + _wire(fixtures.QUADRATIC_B)
    assert parse_matrices(text) == [int_matrix(fixtures.QUADRATIC_A), int_matrix(fixtures.QUADRATIC_B)]


def test_parse_polynomial():
    f = parse_polynomial("2 1 -10 1")
    assert f.coeffs == (1, -10, 1)
    assert emit_polynomial(f.coeffs) == "2 1 -10 1\n"
    with pytest.raises(InputError):
        parse_polynomial("2 1 -10 2")
    with pytest.raises(InputError):
        parse_polynomial("3 1 -10 1")
    with pytest.raises(InputError):
        parse_polynomial("1 1 1")
    with pytest.raises(ReducibleError):
        parse_polynomial("2 -1 0 1")
    assert parse_polynomial("2 -1 0 1", assume_irreducible=True).irreducibility == "assumed"


# =========================
# JOBS
# =========================
def test_job_spec_validation():
    with pytest.raises(ValidationError):
        JobSpec(command="decide", inputs=["x"])
    with pytest.raises(ValidationError):
        JobSpec(command="decide", inputs=["x", "y"], bound=0)
    with pytest.raises(ValidationError):
        JobSpec(command="verify", inputs=["x"], fmt="yaml")
    assert JobSpec(command="decide", inputs=["x"], batch=True).batch


def test_run_decide_two_block_only():
    job = JobSpec(command="decide", inputs=[_wire(fixtures.QUADRATIC_A), _wire(fixtures.QUADRATIC_B)], bound=10)
    result = run(job)
    assert result.exit_code == 3
    assert "TWO-BLOCK CONJUGATE (conjugacy undetermined at bound 10)" in result.output
    assert "[PASS] pair 1: certificate 1 verifies" in result.output
    assert "[FAIL]" not in result.output


def test_run_decide_not_block_conjugate():
    job = JobSpec(command="decide", inputs=[_wire(fixtures.CUBIC_A), _wire(fixtures.CUBIC_B)])
    result = run(job)
    assert result.exit_code == 0
    assert "NOT BLOCK CONJUGATE" in result.output


def test_run_decide_batch():
    text = (
        _wire(fixtures.QUADRATIC_A) + _wire(fixtures.QUADRATIC_A_PRIME)
        + _wire(fixtures.CUBIC_A) + _wire(fixtures.CUBIC_B)
    )
    result = run(JobSpec(command="decide", inputs=[text], batch=True, bound=10))
    assert result.exit_code == 0
    assert "== pair 1 ==" in result.output and "== pair 2 ==" in result.output
    assert "verdict: CONJUGATE" in result.output


def test_run_decide_charpoly_mismatch():
    job = JobSpec(command="decide", inputs=[_wire(fixtures.QUADRATIC_A), _wire(fixtures.INVERSE_B)])
    result = run(job)
    assert result.exit_code == 2
    assert "[block_conjugacy]" in result.output


def test_run_decide_not_unimodular():
    job = JobSpec(command="decide", inputs=[_wire([[2, 1], [1, 2]]), _wire(fixtures.QUADRATIC_B)])
    assert run(job).exit_code == 2


def test_structured_output_is_deterministic():
    job = JobSpec(
        command="decide",
        inputs=[_wire(fixtures.QUADRATIC_A), _wire(fixtures.QUADRATIC_B)],
        bound=5,
        fmt="structured",
    )
    first, second = run(job), run(job)
    assert first.output == second.output
    data = json.loads(first.output)
    assert data["command"] == "decide"
    assert data["success"] is True
    assert data["sections"][0]["payload"]["verdict"].startswith("TWO-BLOCK CONJUGATE")


def test_run_verify_matrix_stream():
    text = _wire(fixtures.QUADRATIC_B) + _wire(fixtures.QUADRATIC_M)
    good = text + _wire(fixtures.QUADRATIC_A) + _wire(fixtures.QUADRATIC_A_PRIME)
    bad = text + _wire(fixtures.QUADRATIC_A) + _wire(fixtures.QUADRATIC_A)

    result = run(JobSpec(command="verify", inputs=[good]))
    assert result.exit_code == 0
    assert "det: 1" in result.output

    result = run(JobSpec(command="verify", inputs=[bad]))
    assert result.exit_code == 1
    assert "[FAIL] certificate 1 verifies" in result.output


def test_run_analyze():
    result = run(JobSpec(command="analyze", inputs=[_wire(fixtures.QUADRATIC_A)]))
    assert result.exit_code == 0
    assert "invertible: True" in result.output
    assert "[PASS] beta on the eigenvector basis reproduces A" in result.output

    result = run(JobSpec(command="analyze", inputs=["2 1 -10 1"]))
    assert result.exit_code == 0
    assert "unit: True" in result.output


def test_run_analyze_cubic_non_invertible():
    result = run(JobSpec(command="analyze", inputs=[_wire(fixtures.CUBIC_A)]))
    assert result.exit_code == 0
    assert "invertible: False" in result.output
    assert "is Z[beta]: False" in result.output


def test_run_fixtures():
    result = run(JobSpec(command="fixtures"))
    assert result.exit_code == 0
    assert "[FAIL]" not in result.output
    assert "[PASS] xi^2 = I" in result.output


# =========================
# TYPER APPLICATION
# =========================
def test_cli_decide(wire_dir):
    result = runner.invoke(app, ["decide", str(wire_dir / "quadratic_A.txt"), str(wire_dir / "quadratic_B.txt"),
                                 "--bound", "5"])
    assert result.exit_code == 3
    assert "TWO-BLOCK CONJUGATE" in result.stdout


def test_cli_decide_cubic(wire_dir):
    result = runner.invoke(app, ["decide", str(wire_dir / "cubic_A.txt"), str(wire_dir / "cubic_B.txt")])
    assert result.exit_code == 0
    assert "NOT BLOCK CONJUGATE" in result.stdout


def test_cli_certify_then_verify(wire_dir, tmp_path):
    store = tmp_path / "store.json"
    result = runner.invoke(app, ["certify", str(wire_dir / "quadratic_A.txt"), str(wire_dir / "quadratic_B.txt"),
                                 "--out", str(store)])
    assert result.exit_code == 0
    assert len(json.loads(store.read_text())["certificates"]) == 2

    result = runner.invoke(app, ["verify", str(store), "--format", "structured"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["success"] is True


def test_cli_certify_not_weakly_equivalent(wire_dir):
    result = runner.invoke(app, ["certify", str(wire_dir / "cubic_A.txt"), str(wire_dir / "cubic_B.txt")])
    assert result.exit_code == 2


def test_cli_missing_file(tmp_path):
    result = runner.invoke(app, ["verify", str(tmp_path / "missing.txt")])
    assert result.exit_code == 2


def test_cli_bad_bound(wire_dir):
    result = runner.invoke(app, ["decide", str(wire_dir / "quadratic_A.txt"), str(wire_dir / "quadratic_B.txt"),
                                 "--bound", "0"])
    assert result.exit_code == 2


def test_cli_fixtures_writes_files(tmp_path):
    out = tmp_path / "fixtures"
    result = runner.invoke(app, ["fixtures", "--out", str(out)])
    assert result.exit_code == 0
    assert parse_matrix((out / "quadratic_M.txt").read_text()) == int_matrix(fixtures.QUADRATIC_M)
    assert parse_polynomial((out / "cubic_f.txt").read_text()).coeffs == fixtures.CUBIC_F


# =========================
# CERTIFICATE STORE
# =========================
def test_store_round_trip(tmp_path):
    path = tmp_path / "store.json"
    store = CertificateStore(str(path))
    for number, cert in enumerate(fixtures.quadratic_certificates(), start=1):
        store.add(record_from_certificate(cert, label=f"certificate {number}"))
    records = load_records(path.read_text())
    assert [r.label for r in records] == ["certificate 1", "certificate 2"]
    assert records[0].conjugator == [list(row) for row in fixtures.QUADRATIC_M]
    assert [r.determinant for r in records] == [1, -1]


@pytest.mark.parametrize(
    "text",
    [
        '{"certificates": 5}',
        "[1, 2]",
        '{"certificates": [{"left": "x"}]}',
        '{"certificates": [',
    ],
)
def test_load_records_rejects_malformed(text):
    with pytest.raises(InputError):
        load_records(text)
    assert run(JobSpec(command="verify", inputs=[text])).exit_code == 2


def test_run_verify_ragged_record():
    record = {
        "left": [[8, 5], [3]],
        "conjugator": [[1, 0], [0, 1]],
        "right_blocks": [[[8, 5], [3, 2]]],
        "minpoly": [1, -10, 1],
        "determinant": 1,
    }
    result = run(JobSpec(command="verify", inputs=[json.dumps({"certificates": [record]})]))
    assert result.exit_code == 1
    assert "[FAIL] certificate 1 verifies" in result.output
