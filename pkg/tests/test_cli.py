import json

import pytest

from kitaevlab.cli import EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, main
from kitaevlab.complex import build_torus, load_complex, save_complex


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_complex_written(capsys, tmp_path):
    path = tmp_path / "t3.cplx"
    code, rep = run(capsys, "complex", "--torus", "3", "--d", "2", "--out", str(path))
    assert code == EXIT_OK and rep["valid"]
    assert load_complex(path.read_text()) == build_torus(3, 2)


def test_complex_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.cplx"
    bad.write_text("complex d=2\ne 0 1\n")
    code, _ = run(capsys, "complex", "--load", str(bad))
    assert code == EXIT_PARSE


def test_complex_validation_error(capsys, tmp_path):
    text = save_complex(build_torus(2)).replace("genus=1", "genus=3")
    path = tmp_path / "wrong.cplx"
    path.write_text(text)
    code, _ = run(capsys, "complex", "--load", str(path))
    assert code == EXIT_INVALID


def test_missing_file_and_bad_d(capsys, tmp_path):
    assert run(capsys, "complex", "--load", str(tmp_path / "nope.cplx"))[0] == EXIT_INVALID
    assert run(capsys, "homology", "--d", "1")[0] == EXIT_INVALID


def test_genus2_euler(capsys):
    code, rep = run(capsys, "complex", "--genus2", "--d", "3")
    assert code == EXIT_OK and rep["euler_characteristic"] == -2


def test_dual_report(capsys):
    code, rep = run(capsys, "complex", "--torus", "3", "--dual")
    assert code == EXIT_OK and (rep["vertices"], rep["faces"]) == (9, 9) and rep["valid"]


@pytest.mark.parametrize("source, b1", [(["--torus", "3"], 2), (["--sphere"], 0), (["--genus2"], 4)])
def test_homology(capsys, source, b1):
    code, rep = run(capsys, "homology", *source)
    assert code == EXIT_OK and rep["b1"] == b1 and rep["pairing_standard"]


def test_groundspace(capsys):
    code, rep = run(capsys, "groundspace", "--torus", "2", "--d", "2")
    assert code == EXIT_OK and rep["dimension"] == "4" and rep["relations"]["ok"]
    code, rep = run(capsys, "groundspace", "--torus", "2", "--d", "2", "--oracle")
    assert rep["oracle"]["projector_rank"] == 4 and rep["oracle"]["gram_error"] < 1e-12
    code, rep = run(capsys, "groundspace", "--sphere", "--d", "4")
    assert code == EXIT_OK and rep["dimension"] == "1"


def test_entropy(capsys, tmp_path):
    region = tmp_path / "star.region"
    cx = build_torus(3)
    region.write_text("region " + " ".join(map(str, cx.incident_edges[4])) + "\n")
    code, rep = run(capsys, "entropy", "--torus", "3", "--region", str(region))
    assert code == EXIT_OK and rep["entropy_over_log_d"] == str(rep["boundary_vertices"] - 1)
    code, rep = run(capsys, "entropy", "--torus", "3")
    assert code == EXIT_OK and rep["entropy"] == 0
    code, rep = run(capsys, "entropy", "--torus", "2", "--edges", "0,1,5", "--oracle")
    assert code == EXIT_OK and rep["oracle_error"] < 1e-9


def test_entropy_unknown_edge(capsys):
    assert run(capsys, "entropy", "--torus", "2", "--edges", "99")[0] == EXIT_INVALID


def test_anyons(capsys):
    code, rep = run(capsys, "anyons", "--braid", "--k", "1", "--l", "1", "--torus", "3", "--d", "5")
    assert code == EXIT_OK and rep["braid"]["exponent"] == 4
    code, rep = run(capsys, "anyons", "--exchange", "--k", "1", "--l", "0", "--d", "5")
    assert code == EXIT_OK and rep["exchange"]["exponent"] == 0
    code, rep = run(capsys, "anyons", "--braid", "--k", "2", "--l", "1", "--d", "3", "--oracle")
    assert code == EXIT_OK and rep["braid"]["oracle_exponent"] == rep["braid"]["exponent"] == 1


def test_anyon_charge(capsys):
    code, rep = run(capsys, "anyons", "--charge", "0", "--d", "3", "--oracle")
    assert code == EXIT_OK
    assert rep["charge"]["oracle_exponent"] == rep["charge"]["exponent"]


def test_verify(capsys):
    code, full = run(capsys, "verify")
    assert code == EXIT_OK and not full["failed"]
    code, quick = run(capsys, "verify", "--quick")
    names = {c["name"] for c in quick["checks"]}
    assert code == EXIT_OK and "ground basis is orthonormal" not in names
    assert names < {c["name"] for c in full["checks"]}


def test_verify_negative_control(capsys):
    code, rep = run(capsys, "verify", "--debug-flip-dual")
    assert code == EXIT_VERIFY
    assert rep["failed"] and all("commut" in name for name in rep["failed"])


def test_table_output(capsys):
    assert main(["homology", "--torus", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "b1" in out and "{" not in out.splitlines()[0]
