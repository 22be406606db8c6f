import csv
import io
import json
import math
import subprocess
import sys

import pytest

from wedgebound import cli
from wedgebound.eigensolver import EigenSolveError


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bound_reflex_csv(capsys):
    code, out, _ = run(["bound", "--domain", "@D1", "--formula", "reflex", "--beta", "1"], capsys)
    assert code == 0
    (r,) = rows(out)
    assert r["formula"] == "Reflex" and r["verdict"] == "issued" and r["provenance"] == "derived"
    assert r["bound"] == "7.66391"
    assert float(r["bound_full"]) == pytest.approx(7.663911366496, rel=1e-12)


def test_bound_fk_json(capsys):
    code, out, _ = run(["bound", "--domain", "@D0", "--formula", "fk", "--format", "json"], capsys)
    assert code == 0
    (r,) = json.loads(out)
    assert float(r["bound_full"]) == pytest.approx(math.pi * 2.404825557695773**2 / 4)


def test_bound_with_explicit_pose(capsys):
    code, out, _ = run(["bound", "--domain", "@D0", "--formula", "pw", "--alpha", "1",
                        "--origin", "0,-1", "--rotation", "0"], capsys)
    assert code == 0
    assert rows(out)[0]["origin_y"] == "-1"


def test_containment_refusal_and_force(capsys):
    code, out, err = run(["bound", "--domain", "@D0", "--formula", "reflex", "--beta", "1"], capsys)
    assert code == 2 and out == "" and "containment" in err
    code, out, _ = run(["bound", "--domain", "@D0", "--formula", "reflex", "--beta", "1", "--force"], capsys)
    assert code == 0 and rows(out)[0]["verdict"] == "invalid-forced"


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--domain", "@D1", "--formula", "reflex"],
        ["bound", "--domain", "@D1", "--formula", "pw"],
        ["bound", "--domain", "@D1", "--formula", "reflex", "--beta", "3"],
        ["bound", "--domain", "@D1", "--formula", "xx"],
        ["bound", "--domain", "@D1", "--formula", "fk", "--origin", "1;2"],
        ["bound", "--formula", "fk"],
        ["bound", "--domain", "@nowhere", "--formula", "fk"],
        ["bound", "--domain", "/no/such/file.json", "--formula", "fk"],
        ["optimize-origin", "--domain", "@D1", "--alpha", "1", "--beta", "1"],
        ["optimize-origin", "--domain", "@D1"],
        ["optimize-origin", "--domain", "@D1", "--beta", "1", "--budget", "5"],
        ["sweep", "--domain", "@D1", "--beta-from", "0.5"],
        ["sweep", "--domain", "@D1", "--beta-to", "2.5"],
        ["sweep", "--domain", "@D1", "--beta-from", "1.8", "--beta-to", "1.2"],
        ["sweep", "--domain", "@D1", "--steps", "0"],
        ["verify", "--domain", "@D1", "--refinements", "1"],
        ["verify", "--domain", "@D1", "--h0", "-1"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 1
    assert out == ""


def test_domain_file_error_names_line(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "shape": "disc",\n  "radius": -2\n}')
    code, _, err = run(["bound", "--domain", str(p), "--formula", "fk"], capsys)
    assert code == 1
    assert f"{p}:3" in err


def test_verify_brackets_bounds(capsys):
    code, out, _ = run(["verify", "--domain", "@D1", "--h0", "0.25"], capsys)
    assert code == 0
    rs = rows(out)
    assert [r["formula"] for r in rs] == ["FK", "Reflex"]
    assert all(r["verdict"] == "ok" for r in rs)
    lam = float(rs[0]["lambda1_full"])
    assert lam == pytest.approx(8.39, abs=0.1)
    assert float(rs[0]["upper_bound"]) >= lam


def test_verify_with_requested_infeasible_family_exits_two(capsys):
    code, _, _ = run(["verify", "--domain", "@D0", "--beta", "1"], capsys)
    assert code == 2


def test_numerical_failure_exits_three(monkeypatch, capsys):
    def boom(*a, **k):
        raise EigenSolveError("no convergence")

    monkeypatch.setattr(cli, "lambda1_fem", boom)
    code, _, err = run(["verify", "--domain", "@D1"], capsys)
    assert code == 3 and "numerical" in err


def test_optimize_cut_disc(capsys):
    code, out, _ = run(["optimize-origin", "--domain", "@cut-disc:1", "--beta", "1"], capsys)
    assert code == 0
    (r,) = rows(out)
    assert float(r["bound_full"]) == pytest.approx(math.pi**2, rel=1e-9)
    assert r["note"].startswith("evaluations=")


def test_optimize_infeasible_exits_two(capsys):
    code, out, _ = run(["optimize-origin", "--domain", "@disc:1", "--beta", "1", "--budget", "60"], capsys)
    assert code == 2
    assert rows(out)[0]["verdict"] == "infeasible"


def test_sweep_flags_maximum(capsys):
    code, out, _ = run(["sweep", "--domain", "@sector:1.5,1", "--steps", "11"], capsys)
    assert code == 0
    rs = rows(out)
    assert len(rs) == 11
    (best,) = [r for r in rs if r["verdict"] == "max"]
    assert float(best["param"]) == pytest.approx(1.5)
    # the sector only fits reflex angles at least as wide as itself
    assert all(r["verdict"] == "infeasible" for r in rs if float(r["param"]) > 1.5 + 1e-9)


def test_sweep_single_step(capsys):
    code, out, _ = run(["sweep", "--domain", "@D1", "--beta-from", "1", "--beta-to", "2", "--steps", "1"], capsys)
    assert code == 0
    (r,) = rows(out)
    assert r["param"] == "1" and r["verdict"] == "max"


def test_sweep_all_infeasible_exits_two(capsys):
    code, _, _ = run(["sweep", "--domain", "@disc:1", "--steps", "3"], capsys)
    assert code == 2


def test_output_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert cli.main(["sweep", "--domain", "@D1", "--steps", "4", "--out", str(p)]) == 0
    assert capsys.readouterr().out == ""
    assert a.read_bytes() == b.read_bytes()


def test_paper_examples_columns(capsys):
    code, out, _ = run(["paper-examples"], capsys)
    assert code == 0
    rs = rows(out)
    assert list(rs[0]) == cli.AUDIT_FIELDS
    assert {r["flag"] for r in rs} <= {"agree", "disagree", "consistent", "inconsistent", "valid", "violated", "n/a"}
    fk = next(r for r in rs if r["key"] == "05-fk-D1")
    assert fk["paper_value"] == "4.5420"


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "wedgebound.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("bound", "verify", "optimize-origin", "sweep", "paper-examples"):
        assert cmd in res.stdout
