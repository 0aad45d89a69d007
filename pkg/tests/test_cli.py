import json
import subprocess
import sys
from pathlib import Path

import pytest

from qtm import ModelParams, SchemaError
from qtm.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from qtm.sweep import SweepSpec, canonicalize_csv, render_csv, run_sweep
from qtm.svg import render_svg

ROOT = Path(__file__).resolve().parent.parent
FIGURES = ROOT / "figures"
SPECS = sorted(p.stem for p in FIGURES.glob("*.json"))


def small_spec(tmp_path, **over):
    spec = {"axis": "t_left", "grid": {"min": 0.5, "max": 2.0, "points": 7},
            "fixed": ModelParams().to_dict(), "quantities": ["current_local", "alpha"]}
    spec.update(over)
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return path


def test_point_report(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(ModelParams(g=0.3, t_right=0.0).to_json())
    assert main(["point", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"params", "local", "numeric", "global"}
    assert out["numeric"]["current"] == pytest.approx(out["local"]["current_two"], rel=1e-8)
    assert "contrast" in out["global"]


def test_point_reports_domain_errors_inline(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(ModelParams(t_left=0.5, t_right=0.5).to_json())
    assert main(["point", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert "error" in out["local"]["contrast"]


@pytest.mark.parametrize("payload", ['{"omega": 1', '{"omega": -1}', '{"bogus": 1}', "[]"])
def test_point_schema_errors(tmp_path, payload, capsys):
    path = tmp_path / "p.json"
    path.write_text(payload)
    assert main(["point", str(path)]) == EXIT_USAGE
    assert "qtm: error" in capsys.readouterr().err


def test_missing_file_and_bad_usage(tmp_path):
    assert main(["point", str(tmp_path / "nope.json")]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "out.csv"
    assert main(["sweep", str(small_spec(tmp_path)), "-o", str(out), "--jobs", "1"]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "t_left,current_local,alpha"
    assert len(lines) == 8


@pytest.mark.parametrize("over", [{"axis": "nope"}, {"quantities": ["nope"]},
                                  {"quantities": []}, {"grid": {"min": 1, "max": 0, "points": 3}},
                                  {"grid": {"min": 0, "max": 1, "points": 3, "spacing": "log"}},
                                  {"extra": 1}, {"series": {"param": "g"}}])
def test_sweep_schema_errors(tmp_path, over):
    assert main(["sweep", str(small_spec(tmp_path, **over)), "-o", str(tmp_path / "o.csv")]) \
        == EXIT_USAGE


def test_sweep_marks_undefined_points(tmp_path, capsys):
    spec = small_spec(tmp_path, axis="temperature", quantities=["current_local", "contrast_local"],
                      grid={"min": 0.4, "max": 0.8, "points": 3})
    out = tmp_path / "o.csv"
    assert main(["sweep", str(spec), "-o", str(out), "--jobs", "1"]) == EXIT_OK
    rows = out.read_text().splitlines()
    assert all(r.endswith(",") and r.count(",") == 2 for r in rows[1:])
    assert "note:" in capsys.readouterr().err


def test_sweep_order_independent_of_jobs(tmp_path):
    spec = SweepSpec.from_json(small_spec(tmp_path, quantities=["current_numeric"]).read_text())
    serial, _ = run_sweep(spec, jobs=1)
    parallel, _ = run_sweep(spec, jobs=3)
    assert serial == parallel


def test_series_columns(tmp_path):
    spec = SweepSpec.from_json(small_spec(tmp_path, series={"param": "g", "values": [0.1, 0.2]})
                               .read_text())
    rows, _ = run_sweep(spec, jobs=1)
    assert rows[0] == ["t_left", "current_local[g=0.1]", "alpha[g=0.1]",
                       "current_local[g=0.2]", "alpha[g=0.2]"]


def test_csv_canonical_round_trip(tmp_path):
    text = (FIGURES / "golden" / "fig2.csv").read_text()
    assert canonicalize_csv(text) == text
    messy = text.replace("0.01,", "1e-2,", 1)
    assert canonicalize_csv(messy) == text
    assert render_csv([["a", "b"], ["1", ""]]) == "a,b\n1,\n"


@pytest.mark.parametrize("name", SPECS)
def test_golden_figures_reproduce(tmp_path, name):
    out = tmp_path / f"{name}.csv"
    assert main(["sweep", str(FIGURES / f"{name}.json"), "-o", str(out), "--jobs", "1"]) == EXIT_OK
    assert out.read_bytes() == (FIGURES / "golden" / f"{name}.csv").read_bytes()


def test_verify_passes_and_writes_json(tmp_path, capsys):
    report = tmp_path / "r.json"
    code = main(["verify", "--seed", "3", "--cases", "8", "--no-chain", "--json", str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text())
    assert data["summary"]["passed"] == data["summary"]["total"] == 9
    assert "passed 9/9" in capsys.readouterr().out


def test_verify_failure_exit_code():
    assert main(["verify", "--cases", "4", "--no-chain", "--tolerance", "1e-300"]) == EXIT_RUNTIME


def test_verify_rejects_zero_cases():
    assert main(["verify", "--cases", "0"]) == EXIT_USAGE


def test_plot_is_deterministic(tmp_path):
    csv_path = FIGURES / "golden" / "fig5.csv"
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["plot", str(csv_path), "-o", str(a)]) == EXIT_OK
    assert main(["plot", str(csv_path), "-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    svg = a.read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert svg.count("<polyline") >= 6


def test_plot_rejects_bad_csv(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,abc\n")
    assert main(["plot", str(bad), "-o", str(tmp_path / "o.svg")]) == EXIT_USAGE
    with pytest.raises(SchemaError):
        render_svg("x\n")


def test_module_entry_point(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(ModelParams().to_json())
    res = subprocess.run([sys.executable, "-m", "qtm", "point", str(path)],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["params"]["g"] == 0.01
