import json
import math

import numpy as np
import pytest

from relcp.cli import build_parser, main
from relcp.datagen import SimScenario
from relcp.errors import ConfigurationError, InvalidInputError
from relcp.harness import ExperimentResult, Method
from relcp.io import (
    SCHEMA_VERSION,
    DetectRequest,
    PanelSeries,
    ParseError,
    emit_plot_data,
    load_panel_csv,
    report_to_json,
    run_detect,
    write_panel_csv,
)


def write(path, text):
    path.write_text(text)
    return path


def test_load_small_panel(tmp_path):
    p = write(tmp_path / "p.csv", "a,b\n0,0\n0,0\n1,1\n1,1\n")
    panel = load_panel_csv(p)
    assert panel.labels == ("a", "b")
    np.testing.assert_array_equal(panel.values, [[0, 0], [0, 0], [1, 1], [1, 1]])


def test_missing_cell_reports_coordinates(tmp_path):
    p = write(tmp_path / "p.csv", "a,b\n0,0\n0,NA\n1,1\n1,1\n")
    with pytest.raises(ParseError) as exc:
        load_panel_csv(p)
    assert (exc.value.row, exc.value.column) == (3, 2)
    assert "row 3" in str(exc.value) and "column 2" in str(exc.value)


def test_ragged_row_reports_row(tmp_path):
    p = write(tmp_path / "p.csv", "a,b\n0,0\n0\n1,1\n1,1\n")
    with pytest.raises(ParseError) as exc:
        load_panel_csv(p)
    assert exc.value.row == 3


@pytest.mark.parametrize("text", ["a,b\n0,0\n1,1\n2,2\n", "a\n1\n2\n3\n4\n", ""])
def test_too_small_or_empty(tmp_path, text):
    with pytest.raises(InvalidInputError):
        load_panel_csv(write(tmp_path / "p.csv", text))


def test_hydrology_shaped_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    panel = PanelSeries(rng.gamma(2.0, 50.0, (105, 365)), tuple(f"day{i}" for i in range(1, 366)))
    write_panel_csv(panel, tmp_path / "flows.csv")
    back = load_panel_csv(tmp_path / "flows.csv")
    assert back.labels == panel.labels
    np.testing.assert_array_equal(back.values, panel.values)


def _planted_csv(path, seed, n=1000, d=20, col=7, jump=5.0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    x[n // 2 :, col] += jump
    write_panel_csv(PanelSeries(x, tuple(f"s{h}" for h in range(d))), path)


def test_detect_reports_labels_and_absolute_indices(tmp_path):
    _planted_csv(tmp_path / "p.csv", 0)
    doc = run_detect(DetectRequest(str(tmp_path / "p.csv"), delta=1.0))
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["relevant_set"] == ["s7"] and doc["reject"]
    comp = doc["components"][7]
    assert comp["label"] == "s7"
    assert comp["change_index"] == round(comp["t_hat"] * 1000)
    assert abs(comp["change_index"] - 500) <= 5


def test_detect_planted_column_monte_carlo(tmp_path):
    runs, exact = 100, 0
    for seed in range(runs):
        _planted_csv(tmp_path / "p.csv", 100 + seed)
        doc = run_detect(DetectRequest(str(tmp_path / "p.csv"), delta=1.0))
        exact += doc["relevant_set"] == ["s7"]
    assert exact / runs >= 0.99


def test_detect_bootstrap_config_echo(tmp_path):
    _planted_csv(tmp_path / "p.csv", 1, n=200, d=10)
    req = DetectRequest(str(tmp_path / "p.csv"), delta=0.63, method="bootstrap", K=4, replicates=150, seed=12)
    doc = run_detect(req)
    assert doc["config"]["deltas"] == [0.63] * 10
    assert all(c["delta"] == 0.63 for c in doc["components"])
    assert doc["bootstrap"]["seed"] == 12 and doc["bootstrap"]["K"] == 4
    assert doc["config"]["estimation"]["separation"] == 0.9
    again = run_detect(req)
    assert again["statistic"] == doc["statistic"] and again["critical_value"] == doc["critical_value"]


def test_deltas_file(tmp_path):
    _planted_csv(tmp_path / "p.csv", 2, n=100, d=4, col=1)
    write(tmp_path / "short.txt", "1.0\n1.0\n")
    with pytest.raises(ConfigurationError):
        run_detect(DetectRequest(str(tmp_path / "p.csv"), deltas_path=str(tmp_path / "short.txt")))
    write(tmp_path / "ok.txt", "1.0, 2.0\n3.0\n4.5\n")
    doc = run_detect(DetectRequest(str(tmp_path / "p.csv"), deltas_path=str(tmp_path / "ok.txt")))
    assert doc["config"]["deltas"] == [1.0, 2.0, 3.0, 4.5]


def test_request_validation():
    with pytest.raises(ConfigurationError):
        DetectRequest("x.csv")
    with pytest.raises(ConfigurationError):
        DetectRequest("x.csv", delta=1.0, method="bootstrap")


def test_report_json_round_trip(tmp_path):
    _planted_csv(tmp_path / "p.csv", 3, n=120, d=5, col=1)
    doc = run_detect(DetectRequest(str(tmp_path / "p.csv"), delta=1.0))
    assert json.loads(report_to_json(doc)) == doc


def _curve():
    sc = SimScenario("I", 100, 100, mu=0.0)
    rates = [1 / 3, 0.0825, 0.2693333333333333]
    return [
        ExperimentResult(
            scenario=SimScenario("I", 100, 100, mu=mu),
            method=Method.bootstrap(1),
            runs=300,
            rejections=round(p * 300),
            rejection_rate=p,
            mc_stderr=math.sqrt(p * (1 - p) / 300),
            wall_time=1.0,
            seed=sc.seed,
        )
        for mu, p in zip([0.9, 1.0, 1.1], rates)
    ]


def test_plot_data(tmp_path):
    path = tmp_path / "curve.csv"
    emit_plot_data(_curve(), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "mu,rejection_rate,mc_stderr,runs"
    assert len(lines) == 4
    mu, rate, se, runs = lines[1].split(",")
    assert float(rate) == 1 / 3 and len(rate.replace("0.", "")) >= 6
    assert float(se) == math.sqrt((1 / 3) * (2 / 3) / 300) and runs == "300"
    first = path.read_bytes()
    emit_plot_data(_curve(), path)
    assert path.read_bytes() == first
    with pytest.raises(InvalidInputError):
        emit_plot_data([], tmp_path / "empty.csv")
    with pytest.raises(OSError):
        emit_plot_data(_curve(), tmp_path / "missing" / "curve.csv")


def test_cli_detect_success_and_failure(tmp_path, capsys):
    _planted_csv(tmp_path / "p.csv", 4, n=100, d=6, col=2)
    out = tmp_path / "report.json"
    assert main(["detect", str(tmp_path / "p.csv"), "--delta", "1", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["relevant_set"] == ["s2"]

    bad = tmp_path / "bad.json"
    code = main(["detect", str(tmp_path / "p.csv"), "--delta", "1", "--method", "bootstrap", "--K", "3", "-o", str(bad)])
    assert code != 0 and not bad.exists()
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"]["type"] == "ConfigurationError"

    assert main(["detect", str(tmp_path / "nope.csv"), "--delta", "1", "-o", str(bad)]) != 0
    assert not bad.exists()
    assert not list(tmp_path.glob(".*.tmp"))


def test_cli_simulate_and_power(tmp_path, capsys):
    args = ["--model", "I", "--n", "100", "--d", "10", "--runs", "50", "--seed", "3"]
    assert main(["simulate", *args, "--mu", "1.0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == SCHEMA_VERSION and doc["results"][0]["runs"] == 50
    csv_path = tmp_path / "power.csv"
    code = main(["power", *args, "--mu-grid", "0.5,1.5", "--method", "bootstrap", "--K", "2", "--replicates", "100", "--csv", str(csv_path), "-o", str(tmp_path / "p.json")])
    assert code == 0
    assert len(csv_path.read_text().splitlines()) == 3
    assert main(["power", *args, "--mu-grid", "", "-o", str(tmp_path / "e.json")]) != 0


def test_cli_defaults_and_help():
    parser = build_parser()
    ns = parser.parse_args(["detect", "x.csv", "--delta", "1"])
    assert (ns.alpha, ns.separation, ns.t_min, ns.bias_correction, ns.combine) == (0.05, 0.9, 0.05, True, "max")
    for cmd in ("detect", "simulate", "power"):
        with pytest.raises(SystemExit) as exc:
            parser.parse_args([cmd, "--help"])
        assert exc.value.code == 0
