import json
import subprocess
import sys

import pytest

from casimir_ge import cli, golden
from casimir_ge.cli import main, parse_range, read_csv, typed_rows_to_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_force_neglected_row(capsys):
    code, out, _ = run(capsys, "force", "--model", "neglected", "--a", "0.8")
    assert code == 0
    assert out.splitlines() == ["a_um, neglected", "0.8, 291.28"]


def test_force_plasma(capsys):
    code, out, _ = run(capsys, "force", "--model", "plasma", "--a", "0.9")
    assert code == 0
    value = float(out.splitlines()[1].split(", ")[1])
    assert value == pytest.approx(237.09, rel=1e-3)


def test_precision_flag(capsys):
    _, out, _ = run(capsys, "force", "--model", "drude", "--a", "1.0", "--precision", "4")
    assert out.splitlines()[1] == "1.0, 176.7770"


@pytest.mark.parametrize(
    "argv",
    [
        ["force", "--model", ""],
        ["force", "--model", "metal"],
        ["force", "--model", "drude,drude"],
        ["compare", "--model", "drude"],
        ["force", "--a-range", "0.6:1.0:0.1"],
        ["force", "--a", "-1"],
        ["force", "--rel-tol", "0.5"],
        ["sweep", "--a-range", "1.0:0.6:0.1"],
        ["force", "--a", "1", "--a-range", "0.6:1.0:0.1"],
        ["force", "--T", "0"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 1


def test_nonconvergence_exit_2(capsys):
    code, out, err = run(capsys, "force", "--model", "drude", "--a", "0.1", "--l-max", "3")
    assert code == 2
    assert out == ""
    assert "not converged" in err


def test_verbose_metadata(capsys):
    _, out, _ = run(capsys, "force", "--model", "drude", "--a", "1.0", "--verbose")
    assert "converged=True" in out and "l_used=" in out


def test_parse_range():
    assert parse_range("0.6:1.0:0.1") == [0.6, 0.7, 0.8, 0.9, 1.0]
    assert parse_range([0.5, 0.5, 0.1]) == [0.5]
    assert parse_range("0.6:0.95:0.1") == [0.6, 0.7, 0.8, 0.9]


def test_sweep_csv_schema_and_round_trip(capsys):
    code, out, _ = run(capsys, "sweep", "--a-range", "0.6:1.0:0.1", "--model", "neglected,drude", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "a_um,model,force_pN,converged,l_used,rel_err_est"
    rows = read_csv(out)
    assert [(r["a_um"], r["model"]) for r in rows[:3]] == [(0.6, "neglected"), (0.6, "drude"), (0.7, "neglected")]
    assert rows[0]["force_pN"] == pytest.approx(679.22, rel=1e-3)
    assert all(r["converged"] for r in rows)
    assert typed_rows_to_csv(rows) == out


def test_parallel_csv_bit_identical(capsys):
    argv = ["sweep", "--a-range", "0.6:1.0:0.1", "--model", "all", "--format", "csv"]
    _, seq, _ = run(capsys, *argv)
    _, par, _ = run(capsys, *argv, "--workers", "4")
    assert seq == par


def test_json_verbose_carries_every_field(capsys):
    _, out, _ = run(capsys, "force", "--model", "plasma", "--a", "0.7", "--format", "json", "--verbose")
    doc = json.loads(out)
    (res,) = doc["results"]
    for key in ("force", "magnitude", "l_used", "truncation_bound", "converged", "rel_err_est", "terms"):
        assert key in res
    assert len(res["terms"]) == res["l_used"] + 1
    assert set(res["terms"][0]) == {"l", "zeta", "tm_contribution", "te_contribution", "quadrature_error_estimate"}
    assert res["force"] < 0 and res["magnitude"] == -res["force"]


def test_json_terse_has_no_terms(capsys):
    _, out, _ = run(capsys, "force", "--model", "plasma", "--a", "0.7", "--format", "json")
    assert "terms" not in json.loads(out)["results"][0]


def test_config_file(tmp_path, capsys):
    conf = tmp_path / "run.json"
    conf.write_text(
        json.dumps(
            {
                "a_range_um": [0.6, 0.7, 0.1],
                "models": ["diffusion"],
                "T": 300,
                "engine": {"rel_tol": 1e-9},
                "material": {"electrons": {"density": 2.3e13}},
                "format": "csv",
            }
        )
    )
    code, out, _ = run(capsys, "sweep", "--config", str(conf))
    assert code == 0
    rows = read_csv(out)
    assert [r["model"] for r in rows] == ["diffusion", "diffusion"]
    assert rows[0]["force_pN"] == pytest.approx(706.63, rel=1e-2)


@pytest.mark.parametrize(
    "content",
    ['{"bogus": 1}', "not json", '{"engine": {"rel_tol": 2}}', '{"material": {"eps_0": 0.5}}', '{"models": []}', "[1, 2]"],
)
def test_malformed_config_exit_1(tmp_path, capsys, content):
    conf = tmp_path / "bad.json"
    conf.write_text(content)
    code, _, err = run(capsys, "force", "--config", str(conf))
    assert code == 1
    assert "error" in err


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "force", "--model", "drude", "--a", "1.0", "--format", "csv", "--output", str(target))
    assert code == 0 and out == ""
    assert read_csv(target.read_text())[0]["model"] == "drude"


def test_table1_default(capsys):
    code, out, _ = run(capsys, "table1", "--check")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "a_um, neglected, drude, plasma, diffusion"
    grid = [line.split(", ") for line in lines[1:6]]
    assert [row[0] for row in grid] == ["0.6", "0.7", "0.8", "0.9", "1.0"]
    values = [float(v) for row in grid for v in row[1:]]
    assert len(values) == 20
    diff_header = lines.index("a_um,model,computed_pN,published_pN,rel_diff,tolerance,ok")
    assert len(lines) - diff_header - 1 == 20
    assert all(line.endswith(",true") for line in lines[diff_header + 1 :])


def test_table1_json_diff(capsys):
    _, out, _ = run(capsys, "table1", "--format", "json")
    doc = json.loads(out)
    assert len(doc["results"]) == 20
    diffusion = [d["published_pN"] for d in doc["diff"] if d["model"] == "diffusion"]
    assert diffusion == [706.63, 453.43, 309.79, 222.08, 165.39]


def test_table1_loose_tolerance(capsys):
    _, tight, _ = run(capsys, "table1", "--format", "json")
    _, loose, _ = run(capsys, "table1", "--format", "json", "--rel-tol", "1e-4")
    t, lo = json.loads(tight), json.loads(loose)
    for a, b in zip(t["results"], lo["results"]):
        assert abs(a["force_pN"] - b["force_pN"]) <= b["rel_err_est"] * b["force_pN"]
    assert all(d["ok"] for d in lo["diff"])


def test_table1_check_mismatch_exit_3(capsys, monkeypatch):
    shifted = dict(golden.TABLE1_PN, neglected=(600.0, 431.14, 291.28, 206.45, 152.00))
    monkeypatch.setattr(golden, "TABLE1_PN", shifted)
    code, _, err = run(capsys, "table1", "--check")
    assert code == 3
    assert "differ" in err
    assert run(capsys, "table1")[0] == 0


def test_compare_report(capsys):
    code, out, _ = run(capsys, "compare", "--a-range", "0.6:1.0:0.1")
    assert code == 0
    assert "ordering |F_neglected| < |F_diffusion| < |F_drude| <= |F_plasma|: PASS" in out
    assert "drude vs plasma almost identical: PASS" in out
    assert "a=0.6um  |F_drude| - |F_neglected| = 68.82 pN" in out


def test_compare_json(capsys):
    _, out, _ = run(capsys, "compare", "--a", "0.6", "--model", "drude,plasma", "--format", "json")
    point = json.loads(out)["comparison"]["points"][0]
    assert point["almost_identical_ok"]
    assert point["drude_plasma_rel"] < 2e-4
    (pair,) = point["pairs"]
    assert (pair["a"], pair["b"]) == ("drude", "plasma")


def test_ordering_helper():
    assert cli.ordering_ok({"neglected": 1.0, "diffusion": 2.0, "drude": 3.0, "plasma": 3.0})
    assert not cli.ordering_ok({"neglected": 2.0, "diffusion": 1.0})
    assert not cli.ordering_ok({"drude": 3.0, "plasma": 2.0})


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "casimir_ge", "force", "--model", "neglected", "--a", "0.6"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "0.6, 679.22"
