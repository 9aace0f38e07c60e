"""Config loading, subcommand tables, serialization round-trip and exit
codes."""

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from sftlab import NotTransitive, ParseError, SupportViolation, UnknownSubcommand
from sftlab.cli import ResultTable, load_config, main, run_subcommand

GOLDEN_CONFIG = {
    "subshift": {"alphabet_size": 2, "forbidden": [[2, 2]]},
    "markov": {"transition": [[0.5, 0.5], [1.0, 0.0]]},
    "grid": {"count": 5, "k_min": 0.3, "k_max": 2.8},
    "mc": {"n_steps": 2000, "n_samples": 4, "seed": 11},
    "bands": {"grid_points": 301, "tol": 1e-10, "max_period": 3},
    "epsilon": 0.01,
    "exclusion_halfwidth": 0.02,
}

FULL_CONFIG = {
    "subshift": {"alphabet_size": 2, "forbidden": []},
    "markov": {"transition": [[0.5, 0.5], [0.5, 0.5]]},
    "grid": {"count": 3, "k_min": 0.5, "k_max": 2.5},
    "mc": {"n_steps": 2000, "n_samples": 4, "seed": 3},
    "bands": {"grid_points": 301, "tol": 1e-10, "max_period": 2},
    "epsilon": 0.01,
    "exclusion_halfwidth": 0.02,
}


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_load_config_valid(tmp_path):
    config = load_config(write_config(tmp_path, GOLDEN_CONFIG))
    assert config.spec.alphabet_size == 2
    assert config.measure.stationary == pytest.approx([2 / 3, 1 / 3], abs=1e-12)
    assert config.grid.points()[0] == 0.3
    assert config.mc.seed == 11


def test_load_config_support_violation(tmp_path):
    bad = json.loads(json.dumps(GOLDEN_CONFIG))
    bad["markov"]["transition"] = [[1.0, 0.0], [1.0, 0.0]]
    with pytest.raises(SupportViolation):
        load_config(write_config(tmp_path, bad))


def test_load_config_not_transitive(tmp_path):
    bad = json.loads(json.dumps(GOLDEN_CONFIG))
    bad["subshift"]["forbidden"] = [[1, 2], [2, 1]]
    with pytest.raises(NotTransitive):
        load_config(write_config(tmp_path, bad))


def test_load_config_parse_errors(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    with pytest.raises(ParseError):
        load_config(str(path))
    missing = {k: v for k, v in GOLDEN_CONFIG.items() if k != "mc"}
    with pytest.raises(ParseError, match="mc"):
        load_config(write_config(tmp_path, missing))
    bad = json.loads(json.dumps(GOLDEN_CONFIG))
    bad["grid"]["count"] = 0
    with pytest.raises(ParseError, match="grid"):
        load_config(write_config(tmp_path, bad))


def test_periodic_table(tmp_path):
    config = load_config(write_config(tmp_path, GOLDEN_CONFIG))
    table = run_subcommand("periodic", config)
    assert table.columns == ("period", "cycle")
    assert table.rows == [(1, "1"), (2, "1,2"), (3, "1,1,2")]


def test_bands_table_full_shift(tmp_path):
    config = load_config(write_config(tmp_path, FULL_CONFIG))
    table = run_subcommand("bands", config)
    # fixed points carry one full band each; the alternating cycle two bands
    assert [(r[0], r[1], r[2]) for r in table.rows] == [
        (1, "1", 0),
        (1, "2", 0),
        (2, "1,2", 0),
        (2, "1,2", 1),
    ]
    assert table.rows[0][3] == 0.0
    assert table.rows[0][4] == math.pi
    assert table.rows[2][4] == pytest.approx(math.acos(1 / 3), abs=1e-8)


def test_candidates_table(tmp_path):
    config = load_config(write_config(tmp_path, FULL_CONFIG))
    table = run_subcommand("candidates", config)
    assert table.columns == ("interval_index", "k_lo", "k_hi")
    assert len(table.rows) == 2
    assert table.rows[0][1] == 0.0
    assert table.rows[1][2] == math.pi


def test_lyapunov_table(tmp_path):
    config = load_config(write_config(tmp_path, FULL_CONFIG))
    table = run_subcommand("lyapunov", config)
    assert len(table.rows) == 3
    assert [r[0] for r in table.rows] == [0.5, 1.5, 2.5]
    assert all(r[3] == 2000 and r[4] == 4 and r[5] == 3 for r in table.rows)


def test_zeroset_table(tmp_path):
    config = load_config(write_config(tmp_path, FULL_CONFIG))
    table = run_subcommand("zeroset", config)
    assert table.columns == ("k", "value", "stderr", "in_exclusion_window")
    for row in table.rows:
        assert row[1] < config.epsilon


def test_kalinin_table(tmp_path):
    config = load_config(write_config(tmp_path, FULL_CONFIG))
    table = run_subcommand("kalinin", config, k=0.9)
    assert table.columns == ("max_period", "gap")
    assert [r[0] for r in table.rows] == [1, 2]
    assert table.rows[1][1] <= table.rows[0][1] + 1e-12
    with pytest.raises(ParseError):
        run_subcommand("kalinin", config)


def test_verify_graph_table(tmp_path):
    config = load_config(write_config(tmp_path, GOLDEN_CONFIG))
    table = run_subcommand("verify-graph", config, k=1.0, seed=5)
    assert table.columns == ("vertex", "residual")
    assert [r[0] for r in table.rows] == list(range(0, 49))
    assert max(abs(r[1]) for r in table.rows) < 1e-9


def test_unknown_subcommand(tmp_path):
    config = load_config(write_config(tmp_path, FULL_CONFIG))
    with pytest.raises(UnknownSubcommand):
        run_subcommand("spectrum", config)


def test_csv_round_trip():
    table = ResultTable(
        "demo",
        ("a", "b", "c"),
        [(1, 0.1 + 0.2, "x,y"), (2, math.pi, "z")],
    )
    text = table.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["a", "b", "c"]
    assert float(rows[1][1]) == 0.1 + 0.2
    assert float(rows[2][1]) == math.pi
    assert rows[1][2] == "x,y"


def test_json_mirror():
    table = ResultTable("demo", ("a",), [(0.5,), (1.0,)])
    payload = json.loads(table.to_json())
    assert payload["schema"] == "demo"
    assert payload["rows"] == [[0.5], [1.0]]


def test_main_writes_csv_and_is_deterministic(tmp_path, capsys):
    path = write_config(tmp_path, FULL_CONFIG)
    assert main(["periodic", "--config", path]) == 0
    first = capsys.readouterr().out
    assert main(["periodic", "--config", path]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.splitlines()[0] == "period,cycle"


def test_main_output_file_and_json(tmp_path, capsys):
    path = write_config(tmp_path, FULL_CONFIG)
    out = tmp_path / "table.json"
    assert main(["candidates", "--config", path, "--json", "--output", str(out)]) == 0
    capsys.readouterr()
    payload = json.loads(out.read_text())
    assert payload["schema"] == "candidates"


def test_main_exit_code_config_error(tmp_path, capsys):
    bad = json.loads(json.dumps(GOLDEN_CONFIG))
    bad["markov"]["transition"] = [[1.0, 0.0], [1.0, 0.0]]
    path = write_config(tmp_path, bad)
    assert main(["periodic", "--config", path]) == 2
    assert "error" in capsys.readouterr().err


def test_main_exit_code_missing_file(capsys):
    assert main(["periodic", "--config", "/nonexistent/x.json"]) == 2
    capsys.readouterr()


def test_main_exit_code_numeric_failure(tmp_path, capsys):
    # a grid touching an integer multiple of pi hits the singular energy
    bad = json.loads(json.dumps(FULL_CONFIG))
    bad["grid"] = {"count": 2, "k_min": 0.5, "k_max": math.pi}
    path = write_config(tmp_path, bad)
    assert main(["lyapunov", "--config", path]) == 3
    assert "error" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    path = write_config(tmp_path, FULL_CONFIG)
    proc = subprocess.run(
        [sys.executable, "-m", "sftlab", "periodic", "--config", path],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "period,cycle"
