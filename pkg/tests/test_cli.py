import json

import pytest
from click.testing import CliRunner

from condcolor.condcolor_modules.graph_io import write_coloring
from condcolor.condcolor_modules.oracles import gear_witness_coloring
from condcolor.condcolor_modules.reports import REPORT_FIELDS
from condcolor.main import cli


@pytest.fixture
def runner():
    return CliRunner()


def _rows(output):
    return [json.loads(line) for line in output.splitlines() if line.startswith("{")]


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------
def test_gen_gear(runner):
    result = runner.invoke(cli, ["gen", "--family", "gear", "--params", "n=3"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "p edge 7 9"
    assert sum(1 for line in lines if line.startswith("e ")) == 9


def test_gen_single_vertex_path(runner):
    result = runner.invoke(cli, ["gen", "--family", "path", "--params", "n=1"])
    assert result.output == "p edge 1 0\n"


def test_gen_line_of_kary_tree(runner, tmp_path):
    target = tmp_path / "lt.txt"
    result = runner.invoke(cli, ["gen", "--family", "line-of-kary-tree", "--params", "k=2,h=2", "--out", str(target)])
    assert result.exit_code == 0
    assert target.read_text().splitlines()[0] == "p edge 6 7"


def test_gen_random_tree_uses_seed(runner):
    first = runner.invoke(cli, ["gen", "--family", "random-tree", "--params", "n=8", "--seed", "42"])
    second = runner.invoke(cli, ["gen", "--family", "random-tree", "--params", "n=8,seed=42"])
    assert first.output == second.output
    assert first.output.startswith("p edge 8 7")


def test_gen_prop2_chain_random_policy_is_reproducible(runner):
    args = ["gen", "--family", "prop2-chain", "--params", "k=8,edge_choice=random"]
    outputs = {runner.invoke(cli, args).output for _ in range(5)}
    assert len(outputs) == 1
    assert outputs.pop().startswith("p edge 10 17")


def test_gen_rejects_bad_parameters(runner):
    result = runner.invoke(cli, ["gen", "--family", "gear", "--params", "n=2"])
    assert result.exit_code == 1
    assert "gear needs n >= 3" in result.output


# ---------------------------------------------------------------------------
# chi / unique
# ---------------------------------------------------------------------------
@pytest.mark.parametrize(
    "family, params, r, expected, theorem",
    [
        ("gear", "n=3", 2, 4, "Thm7"),
        ("path", "n=5", 2, 3, "Prop3"),
        ("complete-bipartite", "m=3,n=3", 3, 6, "Thm2"),
        ("wheel", "n=7", 4, 5, "Thm6"),
    ],
)
def test_chi_on_families(runner, family, params, r, expected, theorem):
    result = runner.invoke(cli, ["chi", "--family", family, "--params", params, "--r", str(r)])
    assert result.exit_code == 0
    (row,) = _rows(result.output)
    assert row["chi_r"] == expected
    assert row["theorem"] == theorem
    assert row["match"] == "equal"


def test_chi_without_oracle_has_no_match(runner):
    result = runner.invoke(cli, ["chi", "--family", "cycle", "--params", "n=5", "--r", "2"])
    (row,) = _rows(result.output)
    assert row["chi_r"] == 5
    assert row["prediction"] is None and row["match"] is None


def test_chi_witness_round_trip_through_verify(runner, tmp_path):
    graph_file = tmp_path / "gear4.txt"
    witness_file = tmp_path / "gear4.witness"
    runner.invoke(cli, ["gen", "--family", "gear", "--params", "n=4", "--out", str(graph_file)])
    result = runner.invoke(
        cli, ["chi", "--graph", str(graph_file), "--r", "3", "--witness", str(witness_file)]
    )
    assert result.exit_code == 0
    (row,) = _rows(result.output)
    assert row["instance"] == str(graph_file)
    assert row["chi_r"] == 5

    verified = runner.invoke(
        cli, ["verify", "--graph", str(graph_file), "--coloring", str(witness_file), "--r", "3"]
    )
    assert verified.exit_code == 0
    assert verified.output.strip() == "ok"


def test_chi_csv_output(runner, tmp_path):
    target = tmp_path / "row.csv"
    result = runner.invoke(
        cli, ["chi", "--family", "path", "--params", "n=4", "--r", "2", "--format", "csv", "--out", str(target)]
    )
    assert result.exit_code == 0
    header, values = target.read_text().splitlines()
    assert header.split(",") == REPORT_FIELDS
    assert values.startswith("path(n=4),Prop3,4,3,2,3,")


def test_chi_timeout_exit_code(runner, instant_timeout):
    result = runner.invoke(
        cli, ["chi", "--family", "gear", "--params", "n=4", "--r", "2", "--timeout-ms", str(instant_timeout)]
    )
    assert result.exit_code == 3
    (row,) = _rows(result.output)
    assert row["chi_r"] == "timeout"
    assert row["match"] is None


def test_chi_input_errors(runner, tmp_path):
    assert runner.invoke(cli, ["chi", "--r", "2"]).exit_code == 1
    missing = runner.invoke(cli, ["chi", "--graph", str(tmp_path / "none.txt"), "--r", "2"])
    assert missing.exit_code == 1


def test_disconnected_file_needs_flag(runner, tmp_path):
    graph_file = tmp_path / "split.txt"
    graph_file.write_text("p edge 4 2\ne 1 2\ne 3 4\n")
    refused = runner.invoke(cli, ["chi", "--graph", str(graph_file), "--r", "1"])
    assert refused.exit_code == 1
    assert "disconnected" in refused.output

    accepted = runner.invoke(cli, ["chi", "--graph", str(graph_file), "--r", "1", "--allow-disconnected"])
    assert accepted.exit_code == 0
    (row,) = _rows(accepted.output)
    assert row["chi_r"] == 2
    assert row["in_paper_scope"] is False


def test_chi_shallow_line_graph_row_is_out_of_scope(runner):
    args = ["chi", "--family", "line-of-kary-tree", "--params", "k=2,h=2", "--r", "4"]
    (plain,) = _rows(runner.invoke(cli, args).output)
    assert plain["prediction"] is None
    assert plain["in_paper_scope"] is True

    result = runner.invoke(cli, args + ["--allow-shallow"])
    assert result.exit_code == 0
    (row,) = _rows(result.output)
    assert (row["chi_r"], row["theorem"], row["match"]) == (4, "Thm5", "mismatch")
    assert row["in_paper_scope"] is False


@pytest.mark.parametrize("value", ["soon", "-5"])
def test_chi_rejects_malformed_timeout_env(runner, monkeypatch, value):
    monkeypatch.setenv("CONDCOLOR_TIMEOUT_MS", value)
    result = runner.invoke(cli, ["chi", "--family", "path", "--params", "n=4", "--r", "2"])
    assert result.exit_code == 1
    assert "CONDCOLOR_TIMEOUT_MS" in result.output


def test_timeout_flag_wins_over_env(runner, monkeypatch):
    monkeypatch.setenv("CONDCOLOR_TIMEOUT_MS", "soon")
    result = runner.invoke(cli, ["chi", "--family", "path", "--params", "n=4", "--r", "2", "--timeout-ms", "5000"])
    assert result.exit_code == 0


@pytest.mark.parametrize(
    "family, params, expected",
    [
        ("path", "n=6", True),
        ("complete-bipartite", "m=1,n=3", False),
        ("prop2-chain", "k=5", True),
    ],
)
def test_unique_on_families(runner, family, params, expected):
    result = runner.invoke(cli, ["unique", "--family", family, "--params", params, "--r", "2"])
    assert result.exit_code == 0
    (row,) = _rows(result.output)
    assert row["unique"] is expected
    assert row["partitions"] == (1 if expected else 2)
    assert row["match"] == "equal"


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------
def _p3_file(tmp_path):
    graph_file = tmp_path / "p3.txt"
    graph_file.write_text("p edge 3 2\ne 1 2\ne 2 3\n")
    return graph_file


@pytest.mark.parametrize(
    "colors, r, expected",
    [
        ("v0 1\nv1 2\nv2 1\n", 2, "violation C2 at v1"),
        ("v0 1\nv1 1\nv2 2\n", 1, "violation C1 at edge (v0,v1)"),
    ],
)
def test_verify_reports_violations(runner, tmp_path, colors, r, expected):
    coloring = tmp_path / "c.txt"
    coloring.write_text(colors)
    result = runner.invoke(
        cli, ["verify", "--graph", str(_p3_file(tmp_path)), "--coloring", str(coloring), "--r", str(r)]
    )
    assert result.exit_code == 2
    assert result.output.startswith(expected)


def test_verify_gear_witness(runner, tmp_path):
    coloring = tmp_path / "gear3.witness"
    write_coloring(gear_witness_coloring(3), coloring)
    result = runner.invoke(
        cli, ["verify", "--family", "gear", "--params", "n=3", "--coloring", str(coloring), "--r", "2"]
    )
    assert result.exit_code == 0
    assert result.output.strip() == "ok"


def test_verify_rejects_malformed_coloring(runner, tmp_path):
    coloring = tmp_path / "bad.txt"
    coloring.write_text("v0 1\nv5 2\n")
    result = runner.invoke(
        cli, ["verify", "--graph", str(_p3_file(tmp_path)), "--coloring", str(coloring), "--r", "1"]
    )
    assert result.exit_code == 1


# ---------------------------------------------------------------------------
# check-theorems
# ---------------------------------------------------------------------------
def test_check_theorems_small_grid(runner, write_config, tmp_path):
    config = write_config([{"check": "gear", "n": [3, 4], "r": [2, 3]}])
    out = tmp_path / "rows.jsonl"
    result = runner.invoke(cli, ["check-theorems", "--config", str(config), "--out", str(out)])
    assert result.exit_code == 0
    rows = _rows(out.read_text())
    assert len(rows) == 4
    assert {row["match"] for row in rows} == {"equal"}
    assert "4 rows: 4 equal" in result.output


def test_check_theorems_tree_join(runner, write_config):
    config = write_config([{"check": "tree_join", "graphs": [{"family": "path", "params": {"n": 3}}], "r": [4, 4]}])
    result = runner.invoke(cli, ["check-theorems", "--config", str(config)])
    assert result.exit_code == 0
    (row,) = _rows(result.output)
    assert (row["chi_r"], row["theorem"]) == (6, "Thm3")


def test_check_theorems_shallow_flag_exits_on_mismatch(runner, write_config):
    config = write_config([{"check": "line_kary", "k": [2, 2], "h": [2, 2], "r": [4, 4]}])
    plain = runner.invoke(cli, ["check-theorems", "--config", str(config)])
    assert plain.exit_code == 0
    assert _rows(plain.output) == []

    shallow = runner.invoke(cli, ["check-theorems", "--config", str(config), "--allow-shallow"])
    assert shallow.exit_code == 2
    (row,) = _rows(shallow.output)
    assert row["match"] == "mismatch"


def test_check_theorems_timeout_override(runner, write_config, instant_timeout):
    config = write_config([{"check": "gear", "n": [4, 4], "r": [2, 2]}])
    result = runner.invoke(
        cli, ["check-theorems", "--config", str(config), "--timeout-ms", str(instant_timeout)]
    )
    assert result.exit_code == 3


def test_check_theorems_bad_config(runner, write_config):
    config = write_config([{"check": "gear", "n": [6, 3], "r": [2, 2]}])
    result = runner.invoke(cli, ["check-theorems", "--config", str(config)])
    assert result.exit_code == 1
    assert "invalid sweep config" in result.output


def test_check_theorems_env_config_must_exist(runner, monkeypatch, tmp_path):
    monkeypatch.setenv("CONDCOLOR_SWEEP_CONFIG", str(tmp_path / "absent.json"))
    result = runner.invoke(cli, ["check-theorems"])
    assert result.exit_code == 1
    assert "invalid sweep config" in result.output
    assert _rows(result.output) == []


def test_check_theorems_env_config_must_parse(runner, monkeypatch, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"entries": [', encoding="utf-8")
    monkeypatch.setenv("CONDCOLOR_SWEEP_CONFIG", str(broken))
    assert runner.invoke(cli, ["check-theorems"]).exit_code == 1


@pytest.mark.parametrize("name, value", [("CONDCOLOR_JOBS", "many"), ("CONDCOLOR_JOBS", "0"), ("CONDCOLOR_TIMEOUT_MS", "x")])
def test_check_theorems_rejects_malformed_env(runner, monkeypatch, write_config, name, value):
    config = write_config([{"check": "path", "n": [3, 3], "r": [2, 2]}])
    monkeypatch.setenv(name, value)
    result = runner.invoke(cli, ["check-theorems", "--config", str(config)])
    assert result.exit_code == 1
    assert name in result.output
